// Motion analysis: event map (colored trajectory or start-point scatter),
// per-type toggles, the six transport KPIs and limit overrides that trigger
// a server-side re-analysis.

import type { ApiClient } from "../api.js";
import { EVENT_COLORS, EVENT_KINDS } from "../colors.js";
import { extent, polylinePath, svgElement } from "../charts.js";
import type { ViewState } from "../state.js";
import { SLIDER_STEP } from "../state.js";
import type { EventKind, Frame, KpiReport, MotionEvent, SessionInfo } from "../types.js";
import { UNCLASSIFIED_COLOR, motionModel } from "../viewmodel.js";

const W = 560;
const H = 430;
const SVG_NS = "http://www.w3.org/2000/svg";

export class MotionView {
  private frames: Frame[] = [];
  private events: MotionEvent[] = [];
  private kpi: KpiReport | null = null;
  private duration = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly state: ViewState,
    private readonly onStateChange: () => void,
  ) {}

  async mount(session: SessionInfo): Promise<void> {
    this.frames = await this.api.frames(session.id);
    this.events = await this.api.events(session.id);
    this.kpi = await this.api.kpi(session.id);
    this.duration = this.kpi.window[1] - this.kpi.window[0];

    const toggles = EVENT_KINDS.map((kind) => `
      <label style="color:${EVENT_COLORS[kind]}">
        <input type="checkbox" data-kind="${kind}"
          ${this.state.types.includes(kind) ? "checked" : ""}> ${kind.replace("_", " ")}
      </label>`).join("");
    this.root.innerHTML = `
      <div class="toolbar">
        <span>mode</span>
        <select id="mot-mode">
          <option value="trajectory"${this.state.mode === "trajectory" ? " selected" : ""}>
            colored trajectory</option>
          <option value="scatter"${this.state.mode === "scatter" ? " selected" : ""}>
            start-point scatter</option>
        </select>
        window <input id="mot-from" type="range" min="0" max="${this.duration.toFixed(1)}"
          step="${SLIDER_STEP}" value="${this.state.from ?? 0}">
        <input id="mot-to" type="range" min="0" max="${(this.duration + SLIDER_STEP).toFixed(1)}"
          step="${SLIDER_STEP}" value="${this.state.to ?? this.duration + SLIDER_STEP}">
        <span id="mot-window"></span>
      </div>
      <div class="toolbar" id="mot-toggles">${toggles}</div>
      <div class="panes">
        <div><h3>event map</h3><div id="mot-map"></div></div>
        <div>
          <h3>transport KPIs</h3><table id="mot-kpi"></table>
          <h3>limit overrides</h3>
          <div class="limits">
            standstill&lt; <input id="lim-standstill" type="number" value="100"> mm/s<br>
            maneuvering&lt; <input id="lim-maneuver" type="number" value="500"> mm/s<br>
            braking&le; <input id="lim-brake" type="number" value="-1500"> mm/s²<br>
            acceleration&ge; <input id="lim-accel" type="number" value="1500"> mm/s²<br>
            <button id="mot-reanalyze">re-analyze</button>
          </div>
          <div id="mot-error" class="error"></div>
        </div>
      </div>`;

    this.root.querySelector<HTMLSelectElement>("#mot-mode")!.onchange = (e) => {
      this.state.mode = (e.target as HTMLSelectElement).value === "scatter"
        ? "scatter" : "trajectory";
      this.onStateChange();
      this.render();
    };
    for (const box of this.root.querySelectorAll<HTMLInputElement>("#mot-toggles input")) {
      box.onchange = () => {
        const active = [...this.root.querySelectorAll<HTMLInputElement>("#mot-toggles input")]
          .filter((b) => b.checked)
          .map((b) => b.dataset.kind as EventKind);
        this.state.types = active;
        this.onStateChange();
        this.render();
      };
    }
    const onWindow = async () => {
      this.state.from = Number(this.root.querySelector<HTMLInputElement>("#mot-from")!.value);
      this.state.to = Number(this.root.querySelector<HTMLInputElement>("#mot-to")!.value);
      this.onStateChange();
      this.kpi = await this.api.kpi(session.id, { from: this.state.from, to: this.state.to });
      this.render();
    };
    this.root.querySelector<HTMLInputElement>("#mot-from")!.onchange = onWindow;
    this.root.querySelector<HTMLInputElement>("#mot-to")!.onchange = onWindow;

    this.root.querySelector<HTMLButtonElement>("#mot-reanalyze")!.onclick = async () => {
      const read = (id: string) =>
        Number(this.root.querySelector<HTMLInputElement>(id)!.value);
      const error = this.root.querySelector("#mot-error")!;
      try {
        const result = await this.api.reanalyze(session.id, {
          standstill_speed_below: read("#lim-standstill"),
          maneuvering_speed_below: read("#lim-maneuver"),
          braking_accel_at_most: read("#lim-brake"),
          acceleration_accel_at_least: read("#lim-accel"),
        });
        this.events = result.events;
        this.kpi = result.kpi;
        error.textContent = "";
        this.render();
      } catch (err) {
        // keep the previous state on failure
        error.textContent = `re-analysis failed: ${String(err)}`;
      }
    };
    this.render();
  }

  private render(): void {
    if (!this.kpi) return;
    const label = this.root.querySelector("#mot-window");
    if (label) {
      const from = this.state.from ?? 0;
      const to = this.state.to ?? this.duration + SLIDER_STEP;
      label.textContent = `[${from.toFixed(1)}, ${to.toFixed(1)}) s`;
    }
    const model = motionModel(this.events, this.kpi, this.frames, this.state.types);
    const table = this.root.querySelector("#mot-kpi")!;
    table.innerHTML = model.kpis
      .map((k) => `<tr><td>${k.label}</td><td><b data-kpi="${k.key}">${
        k.key === "equipment_utilization" ? k.value.toFixed(3) : k.value.toFixed(1)
      }</b> ${k.unit}</td></tr>`)
      .join("");

    const svg = svgElement(W, H);
    const xs = model.backdrop.map((p) => p[0]);
    const ys = model.backdrop.map((p) => p[1]);
    const xe = extent(xs);
    const ye = extent(ys);
    const backdrop = document.createElementNS(SVG_NS, "path");
    backdrop.setAttribute("d", polylinePath(xs, ys, xe, ye, W, H));
    backdrop.setAttribute("fill", "none");
    backdrop.setAttribute("stroke", UNCLASSIFIED_COLOR);
    backdrop.setAttribute("stroke-width", "0.8");
    svg.appendChild(backdrop);
    if (this.state.mode === "trajectory") {
      for (const seg of model.segments) {
        const path = document.createElementNS(SVG_NS, "path");
        path.setAttribute(
          "d",
          polylinePath(seg.points.map((p) => p[0]), seg.points.map((p) => p[1]), xe, ye, W, H),
        );
        path.setAttribute("fill", "none");
        path.setAttribute("stroke", seg.color);
        path.setAttribute("stroke-width", "2.2");
        svg.appendChild(path);
      }
    } else {
      const sx = (x: number) => ((x - xe.min) / (xe.max - xe.min)) * W;
      const sy = (y: number) => H - ((y - ye.min) / (ye.max - ye.min)) * H;
      for (const pt of model.startPoints) {
        const dot = document.createElementNS(SVG_NS, "circle");
        dot.setAttribute("cx", sx(pt.x).toFixed(1));
        dot.setAttribute("cy", sy(pt.y).toFixed(1));
        dot.setAttribute("r", "5");
        dot.setAttribute("fill", pt.color);
        svg.appendChild(dot);
      }
    }
    const host = this.root.querySelector("#mot-map")!;
    host.innerHTML = "";
    host.appendChild(svg);
  }
}
