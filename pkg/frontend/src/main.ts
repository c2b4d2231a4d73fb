// Bootstrap: session picker, view tabs and URL round-tripping of the state.

import { ApiClient } from "./api.js";
import { ViewState, decodeState, encodeState } from "./state.js";
import type { SessionInfo } from "./types.js";
import { AreaView } from "./views/area.js";
import { MonitorView } from "./views/monitor.js";
import { MotionView } from "./views/motion.js";

const api = new ApiClient("");
const state: ViewState = decodeState(window.location.search);

const sessionsEl = document.querySelector<HTMLSelectElement>("#sessions")!;
const newSessionBtn = document.querySelector<HTMLButtonElement>("#new-session")!;
const tabsEl = document.querySelector<HTMLElement>("#tabs")!;
const viewEl = document.querySelector<HTMLElement>("#view")!;

const monitor = new MonitorView(api, viewEl, () => void refreshSessions());
let active: MonitorView | AreaView | MotionView | null = null;

function syncUrl(): void {
  const qs = encodeState(state);
  window.history.replaceState(null, "", qs ? `?${qs}` : window.location.pathname);
}

async function refreshSessions(): Promise<SessionInfo[]> {
  const sessions = await api.listSessions();
  sessionsEl.innerHTML = sessions
    .map((s) => `<option value="${s.id}"${s.id === state.session ? " selected" : ""}>
        ${s.id} (${s.state}, ${s.frame_count} frames)</option>`)
    .join("");
  return sessions;
}

async function mountView(): Promise<void> {
  if (active instanceof MonitorView) active.unmount();
  active = null;
  viewEl.innerHTML = "";
  if (!state.session) {
    viewEl.innerHTML = "<p>Create or select a session to begin.</p>";
    return;
  }
  const info = await api.sessionInfo(state.session);
  for (const tab of tabsEl.querySelectorAll("button")) {
    tab.classList.toggle("active", tab.dataset.view === state.view);
  }
  if (state.view === "monitor") {
    await monitor.mount(info);
    active = monitor;
  } else if (state.view === "area") {
    const view = new AreaView(api, viewEl, state, syncUrl);
    await view.mount(info);
    active = view;
  } else {
    const view = new MotionView(api, viewEl, state, syncUrl);
    await view.mount(info);
    active = view;
  }
}

tabsEl.addEventListener("click", (ev) => {
  const target = ev.target as HTMLElement;
  const view = target.dataset.view;
  if (view === "monitor" || view === "area" || view === "motion") {
    state.view = view;
    syncUrl();
    void mountView();
  }
});

sessionsEl.addEventListener("change", () => {
  state.session = sessionsEl.value || null;
  state.from = null;
  state.to = null;
  syncUrl();
  void mountView();
});

newSessionBtn.addEventListener("click", async () => {
  const info = await api.createSession();
  state.session = info.id;
  state.view = "monitor";
  syncUrl();
  await refreshSessions();
  await mountView();
});

void (async () => {
  const sessions = await refreshSessions();
  if (!state.session && sessions.length > 0) state.session = sessions[0].id;
  syncUrl();
  await mountView();
})();
