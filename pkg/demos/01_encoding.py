"""How a sensor reading becomes the memory's 21-bit input vector.

Run from the repo root:  python3 demos/01_encoding.py
"""

from smartfan.encoding import SensorReading, decode_vector, encode_reading, to_bipolar


def show(reading):
    vec = encode_reading(reading)
    bits = "".join(str(b) for b in vec)
    t, d, h = bits[0:7], bits[7:14], bits[14:21]
    print(f"{reading.as_tuple()!s:>14}  ->  {t} | {d} | {h}")
    return vec


print("reading (t,d,h)       temp    | duration | humidity   (LSB first)")
for fields in [(28, 60, 85), (40, 10, 85), (17, 40, 85), (0, 0, 0), (127, 127, 127)]:
    show(SensorReading(*fields))

# Each field owns one 7-bit block, so 28 = 0011100 reads right-to-left:
# bit 2 + bit 3 + bit 4 = 4 + 8 + 16 = 28.
vec = show(SensorReading(28, 0, 0))
weights = [1 << k for k in range(7)]
total = sum(w for w, b in zip(weights, vec[:7]) if b)
print(f"\nblock arithmetic: set bits of the temperature block sum to {total}")

# The codec is a true inverse pair.
assert decode_vector(vec) == SensorReading(28, 0, 0)
print("decode_vector(encode_reading(r)) == r")

# Training uses the same vector in bipolar form: zeros become -1.
print("\nbinary :", encode_reading(SensorReading(28, 60, 85)).tolist())
print("bipolar:", to_bipolar(encode_reading(SensorReading(28, 60, 85))).tolist())
