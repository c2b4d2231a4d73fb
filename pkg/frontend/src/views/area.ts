// Area analysis: spaghetti chart next to a sector heatmap, both re-queried
// when the time sliders or the sector size change.

import type { ApiClient } from "../api.js";
import { extent, heatColor, polylinePath, svgElement } from "../charts.js";
import type { ViewState } from "../state.js";
import { SLIDER_STEP } from "../state.js";
import type { HeatmapLayer, SessionInfo } from "../types.js";
import { areaModel } from "../viewmodel.js";

const W = 440;
const H = 400;
const SVG_NS = "http://www.w3.org/2000/svg";

export class AreaView {
  private duration = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly state: ViewState,
    private readonly onStateChange: () => void,
  ) {}

  async mount(session: SessionInfo): Promise<void> {
    this.duration = Math.max(session.frame_count > 0 ? 1 : 0, 0);
    const info = await this.api.kpi(session.id).catch(() => null);
    this.duration = info ? info.window[1] - info.window[0] : 0;
    const from = this.state.from ?? 0;
    const to = this.state.to ?? this.duration + SLIDER_STEP;
    this.root.innerHTML = `
      <div class="toolbar">
        window <input id="area-from" type="range" min="0" max="${this.duration.toFixed(1)}"
          step="${SLIDER_STEP}" value="${from}">
        <input id="area-to" type="range" min="0" max="${(this.duration + SLIDER_STEP).toFixed(1)}"
          step="${SLIDER_STEP}" value="${to}">
        <span id="area-window"></span>
        sector <input id="area-sector" type="number" min="50" step="50"
          value="${this.state.sector}"> mm
        metric <select id="area-metric">
          <option value="dwell_time">dwell time</option>
          <option value="max_speed">max speed</option>
          <option value="max_accel">max acceleration</option>
        </select>
      </div>
      <div class="panes">
        <div><h3>trajectory</h3><div id="area-spaghetti"></div></div>
        <div><h3>heatmap</h3><div id="area-heatmap"></div></div>
      </div>
      <div id="area-note"></div>`;

    const refresh = () => void this.refresh(session.id);
    for (const id of ["#area-from", "#area-to", "#area-sector"]) {
      this.root.querySelector<HTMLInputElement>(id)!.onchange = () => {
        this.state.from = Number(this.root.querySelector<HTMLInputElement>("#area-from")!.value);
        this.state.to = Number(this.root.querySelector<HTMLInputElement>("#area-to")!.value);
        this.state.sector = Number(
          this.root.querySelector<HTMLInputElement>("#area-sector")!.value,
        );
        this.onStateChange();
        refresh();
      };
    }
    this.root.querySelector<HTMLSelectElement>("#area-metric")!.onchange = refresh;
    await this.refresh(session.id);
  }

  private async refresh(sessionId: string): Promise<void> {
    const from = this.state.from ?? 0;
    const to = this.state.to ?? this.duration + SLIDER_STEP;
    const metric = this.root.querySelector<HTMLSelectElement>("#area-metric")!
      .value as HeatmapLayer["metric"];
    const note = this.root.querySelector("#area-note")!;
    const label = this.root.querySelector("#area-window");
    if (label) label.textContent = `[${from.toFixed(1)}, ${to.toFixed(1)}) s`;
    try {
      const [trajectory, heatmap] = await Promise.all([
        this.api.trajectory(sessionId, { from, to }),
        this.api.heatmap(sessionId, metric, this.state.sector, { from, to }),
      ]);
      const model = areaModel(trajectory, heatmap);
      if (model.empty) {
        note.textContent = "no frames in the selected window";
        return;
      }
      note.textContent = metric === "dwell_time"
        ? `sector sum ${model.dwellSum.toFixed(1)} s over ${model.polylines.length} polyline(s)`
        : "";
      this.renderSpaghetti(model.polylines);
      this.renderHeatmap(model);
    } catch {
      note.textContent = "no frames in the selected window";
      this.root.querySelector("#area-spaghetti")!.innerHTML = "";
      this.root.querySelector("#area-heatmap")!.innerHTML = "";
    }
  }

  private renderSpaghetti(polylines: Array<Array<[number, number, number]>>): void {
    const xs = polylines.flatMap((line) => line.map((p) => p[1]));
    const ys = polylines.flatMap((line) => line.map((p) => p[2]));
    const xe = extent(xs);
    const ye = extent(ys);
    const svg = svgElement(W, H);
    for (const line of polylines) {
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute(
        "d",
        polylinePath(line.map((p) => p[1]), line.map((p) => p[2]), xe, ye, W, H),
      );
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", "#1f77b4");
      path.setAttribute("stroke-width", "1");
      svg.appendChild(path);
    }
    const host = this.root.querySelector("#area-spaghetti")!;
    host.innerHTML = "";
    host.appendChild(svg);
  }

  private renderHeatmap(model: ReturnType<typeof areaModel>): void {
    const svg = svgElement(W, H);
    if (model.cells.length > 0) {
      const xs = model.cells.flatMap((c) => [c.x0, c.x0 + c.size]);
      const ys = model.cells.flatMap((c) => [c.y0, c.y0 + c.size]);
      const xe = extent(xs, 0.02);
      const ye = extent(ys, 0.02);
      const sx = (x: number) => ((x - xe.min) / (xe.max - xe.min)) * W;
      const sy = (y: number) => H - ((y - ye.min) / (ye.max - ye.min)) * H;
      for (const cell of model.cells) {
        const rect = document.createElementNS(SVG_NS, "rect");
        rect.setAttribute("x", sx(cell.x0).toFixed(1));
        rect.setAttribute("y", sy(cell.y0 + cell.size).toFixed(1));
        rect.setAttribute("width", (sx(cell.x0 + cell.size) - sx(cell.x0)).toFixed(1));
        rect.setAttribute("height", (sy(cell.y0) - sy(cell.y0 + cell.size)).toFixed(1));
        rect.setAttribute("fill", heatColor(cell.value / (model.maxValue || 1)));
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = cell.value.toFixed(2);
        rect.appendChild(title);
        svg.appendChild(rect);
      }
    }
    const host = this.root.querySelector("#area-heatmap")!;
    host.innerHTML = "";
    host.appendChild(svg);
  }
}
