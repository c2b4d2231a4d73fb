// Live monitor: strip charts of position/speed/acceleration plus numeric
// readouts, fed by the session's push stream.

import type { ApiClient } from "../api.js";
import { stripChart } from "../charts.js";
import type { Frame, SessionInfo } from "../types.js";
import { MonitorModel, emptyMonitorModel, pushFrame } from "../viewmodel.js";

export class MonitorView {
  private model: MonitorModel = emptyMonitorModel();
  private unsubscribe: (() => void) | null = null;
  private rendering = false;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly onFinalized: () => void,
  ) {}

  async mount(session: SessionInfo): Promise<void> {
    this.unmount();
    this.model = emptyMonitorModel();
    this.root.innerHTML = `
      <div class="toolbar">
        <span class="badge" id="mon-state">${session.state}</span>
        <button id="mon-finalize" ${session.state !== "live" ? "disabled" : ""}>
          finalize recording</button>
        <span id="mon-status"></span>
      </div>
      <div class="readouts">
        <div>elapsed <b id="mon-elapsed">0.0</b> s</div>
        <div>position <b id="mon-pos">–</b> mm</div>
        <div>distance <b id="mon-dist">0</b> mm</div>
        <div>speed <b id="mon-speed">0</b> mm/s</div>
      </div>
      <h3>position x/y [mm]</h3><div id="mon-xy"></div>
      <h3>speed [mm/s]</h3><div id="mon-v"></div>
      <h3>acceleration [mm/s²]</h3><div id="mon-a"></div>`;

    const finalizeBtn = this.root.querySelector<HTMLButtonElement>("#mon-finalize")!;
    finalizeBtn.onclick = async () => {
      finalizeBtn.disabled = true;
      await this.api.finalize(session.id);
      this.setStatus("finalized");
      this.onFinalized();
    };

    if (session.state === "live") {
      this.unsubscribe = this.api.subscribeLive(
        session.id,
        (frame) => this.accept(frame),
        () => this.setStatus("stream ended"),
        () => this.setStatus("disconnected, retrying..."),
      );
    } else {
      const frames = await this.api.frames(session.id, {}, 5);
      for (const f of frames) this.accept(f, false);
      this.render();
    }
  }

  unmount(): void {
    this.unsubscribe?.();
    this.unsubscribe = null;
  }

  private setStatus(text: string): void {
    const el = this.root.querySelector("#mon-status");
    if (el) el.textContent = text;
  }

  private accept(frame: Frame, render = true): void {
    this.model = pushFrame(this.model, frame);
    if (render && !this.rendering) {
      this.rendering = true;
      requestAnimationFrame(() => {
        this.render();
        this.rendering = false;
      });
    }
  }

  private render(): void {
    const m = this.model;
    const set = (id: string, text: string) => {
      const el = this.root.querySelector(id);
      if (el) el.textContent = text;
    };
    set("#mon-elapsed", m.elapsed.toFixed(1));
    set("#mon-dist", m.distance.toFixed(0));
    if (m.latest) {
      set("#mon-pos", `${m.latest.x.toFixed(0)}, ${m.latest.y.toFixed(0)}`);
      set("#mon-speed", m.latest.speed.toFixed(0));
    }
    const mount = (sel: string, chart: SVGSVGElement) => {
      const host = this.root.querySelector(sel);
      if (host) {
        host.innerHTML = "";
        host.appendChild(chart);
      }
    };
    mount("#mon-v", stripChart(m.t, m.speed, "#2ca02c"));
    mount("#mon-a", stripChart(m.t, m.accel, "#9467bd"));
    mount("#mon-xy", stripChart(m.x, m.y, "#1f77b4", 560, 160));
  }
}
