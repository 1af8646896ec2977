import type { WeightsDoc } from "./types.js";

/** Field blocks in input-vector order; 7 bits each, LSB first. */
const BLOCKS: Array<[string, string]> = [
  ["t", "temperature"],
  ["d", "duration"],
  ["h", "humidity"],
];

export interface HeatmapCell {
  value: number;
  color: string;
  /** Tooltip text: row label, column, exact weight. */
  title: string;
}

export interface HeatmapModel {
  columnLabels: string[];
  rows: Array<{ label: string; block: string; cells: HeatmapCell[] }>;
  maxAbs: number;
}

/** Label for input bit `i`: t0..t6, d0..d6, h0..h6 (bit index is LSB first). */
export function rowLabel(i: number): string {
  const block = BLOCKS[Math.floor(i / 7)];
  // rows past the three known blocks get a plain index label
  if (i < 0 || !block) return `b${i}`;
  return `${block[0]}${i % 7}`;
}

/**
 * Diverging color for a signed weight: blue for negative, red for
 * positive, white at zero, saturation proportional to |value| / maxAbs.
 */
export function cellColor(value: number, maxAbs: number): string {
  const t = maxAbs <= 0 ? 0 : Math.min(Math.abs(value) / maxAbs, 1);
  const k = Math.round(t * 190);
  if (value > 0) return `rgb(255, ${255 - k}, ${255 - k})`;
  if (value < 0) return `rgb(${255 - k}, ${255 - k}, 255)`;
  return "rgb(255, 255, 255)";
}

/** Build a render-ready model from a weights document. */
export function buildHeatmapModel(doc: WeightsDoc): HeatmapModel {
  let maxAbs = 0;
  for (const row of doc.data) {
    for (const v of row) maxAbs = Math.max(maxAbs, Math.abs(v));
  }
  const columnLabels = Array.from({ length: doc.cols }, (_, c) => `speed ${c}`);
  const rows = doc.data.map((row, i) => {
    const blockEntry = BLOCKS[Math.floor(i / 7)];
    const block = blockEntry ? blockEntry[1] : "?";
    const label = rowLabel(i);
    const cells = row.map((value, c) => ({
      value,
      color: cellColor(value, maxAbs),
      title: `${label} x speed ${c}: ${value}`,
    }));
    return { label, block, cells };
  });
  return { columnLabels, rows, maxAbs };
}
