// Minimal SVG chart helpers; no chart library, everything is plain markup.

const SVG_NS = "http://www.w3.org/2000/svg";

export interface Extent {
  min: number;
  max: number;
}

export function extent(values: number[], pad = 0.05): Extent {
  if (values.length === 0) return { min: 0, max: 1 };
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const span = max - min;
  return { min: min - span * pad, max: max + span * pad };
}

export function svgElement(width: number, height: number): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", "100%");
  return svg;
}

export function polylinePath(
  xs: number[],
  ys: number[],
  xe: Extent,
  ye: Extent,
  width: number,
  height: number,
): string {
  const sx = (x: number) => ((x - xe.min) / (xe.max - xe.min)) * width;
  const sy = (y: number) => height - ((y - ye.min) / (ye.max - ye.min)) * height;
  let d = "";
  for (let i = 0; i < xs.length; i++) {
    d += `${i === 0 ? "M" : "L"}${sx(xs[i]).toFixed(1)},${sy(ys[i]).toFixed(1)}`;
  }
  return d;
}

export function stripChart(
  t: number[],
  values: number[],
  color: string,
  width = 560,
  height = 120,
): SVGSVGElement {
  const svg = svgElement(width, height);
  if (t.length > 1) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", polylinePath(t, values, extent(t, 0), extent(values), width, height));
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", color);
    path.setAttribute("stroke-width", "1.2");
    svg.appendChild(path);
  }
  const axis = document.createElementNS(SVG_NS, "line");
  axis.setAttribute("x1", "0");
  axis.setAttribute("x2", String(width));
  const ve = extent(values);
  const zeroY = height - ((0 - ve.min) / (ve.max - ve.min)) * height;
  axis.setAttribute("y1", zeroY.toFixed(1));
  axis.setAttribute("y2", zeroY.toFixed(1));
  axis.setAttribute("stroke", "#ddd");
  svg.appendChild(axis);
  return svg;
}

/** Map a 0..1 intensity onto a blue->red ramp. */
export function heatColor(intensity: number): string {
  const v = Math.max(0, Math.min(1, intensity));
  const r = Math.round(40 + 215 * v);
  const g = Math.round(60 + 60 * (1 - v));
  const b = Math.round(160 * (1 - v) + 40);
  return `rgb(${r},${g},${b})`;
}
