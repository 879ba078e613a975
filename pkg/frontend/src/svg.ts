// Minimal string-assembled SVG: no DOM, byte-stable output.

const ESC: Record<string, string> = {
  "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;",
};

export function esc(s: string): string {
  return s.replace(/[&<>"]/g, (c) => ESC[c]);
}

/** Fixed-precision coordinate so output does not wobble with float noise. */
export function fmt(x: number): string {
  return Number(x.toFixed(2)).toString();
}

export type Attrs = Record<string, string | number>;

export function el(tag: string, attrs: Attrs, body = ""): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join("");
  return body === "" ? `<${tag}${a}/>` : `<${tag}${a}>${body}</${tag}>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): string {
  return el("line", { x1, y1, x2, y2, ...attrs });
}

export function text(x: number, y: number, s: string, attrs: Attrs = {}): string {
  return el("text", { x, y, ...attrs }, esc(s));
}

export function svgDoc(width: number, height: number, parts: string[]): string {
  const open = `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"`
    + ` viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`;
  return [open, ...parts, "</svg>", ""].join("\n");
}
