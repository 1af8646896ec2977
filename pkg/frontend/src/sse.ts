/**
 * Minimal incremental parser for text/event-stream bodies.
 *
 * The service only ever sends `data:` lines, but the parser follows the
 * general framing rules anyway: events are separated by a blank line,
 * multiple data lines concatenate with newlines, lines starting with a
 * colon are comments, and both \n and \r\n terminators are accepted.
 */
export class SseParser {
  private buffer = "";
  private dataLines: string[] = [];

  /** Feed a decoded chunk; returns the payloads of any completed events. */
  feed(chunk: string): string[] {
    this.buffer += chunk;
    const events: string[] = [];
    for (;;) {
      const nl = this.buffer.indexOf("\n");
      if (nl < 0) break;
      let line = this.buffer.slice(0, nl);
      this.buffer = this.buffer.slice(nl + 1);
      if (line.endsWith("\r")) line = line.slice(0, -1);
      if (line === "") {
        // blank line: dispatch the event, if any data accumulated
        if (this.dataLines.length > 0) {
          events.push(this.dataLines.join("\n"));
          this.dataLines = [];
        }
        continue;
      }
      if (line.startsWith(":")) continue;
      const colon = line.indexOf(":");
      const field = colon < 0 ? line : line.slice(0, colon);
      if (field !== "data") continue;
      let value = colon < 0 ? "" : line.slice(colon + 1);
      if (value.startsWith(" ")) value = value.slice(1);
      this.dataLines.push(value);
    }
    return events;
  }
}
