import { api } from "./api.js";
import { renderDrift, renderMonthlyRates, renderTopEvents } from "./panels.js";
import { draftFromLive, draftProblem, initialState, type ConsoleState } from "./state.js";
import { renderTimeline } from "./timeline.js";
import type { MonthRates } from "./types.js";

const state: ConsoleState = initialState();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

async function refreshTimeline(): Promise<void> {
  if (!state.selectedPlant || !state.liveThresholds) return;
  const series = await api.risk(
    state.selectedPlant,
    state.dateFrom ?? undefined,
    state.dateTo ?? undefined
  );
  $("timeline").innerHTML = renderTimeline(series, state.liveThresholds);
}

async function refreshPanels(): Promise<void> {
  if (!state.selectedPlant) return;
  const plant = state.selectedPlant;
  const [drift, topk] = await Promise.all([api.drift(), api.topk(plant)]);
  const rates = (drift.monthly_alert_rates[plant] ?? {}) as Record<string, MonthRates>;
  $("rates").innerHTML = renderMonthlyRates(rates);
  $("topk").innerHTML = renderTopEvents(topk);
  const d = drift.per_plant[plant];
  $("drift").innerHTML = d
    ? renderDrift(plant, d.psi, d.ks)
    : `<p class="empty-state">No drift comparison for this plant</p>`;
}

function syncDraftUi(): void {
  if (!state.draft) return;
  const problem = draftProblem(state.draft);
  ($("whatif-submit") as HTMLButtonElement).disabled = problem !== null;
  $("whatif-problem").textContent = problem ?? "";
  $("watch-value").textContent = state.draft.tau_watch.toFixed(3);
  $("action-value").textContent = state.draft.tau_action.toFixed(3);
}

function showLiveThresholds(): void {
  if (!state.liveThresholds) return;
  const t = state.liveThresholds;
  $("live-thresholds").textContent =
    `live: WATCH ≥ ${t.tau_watch.toFixed(4)}, ACTION ≥ ${t.tau_action.toFixed(4)} (${t.source})`;
}

function resetDraft(): void {
  if (!state.liveThresholds) return;
  state.draft = draftFromLive(state.liveThresholds);
  ($("watch-slider") as HTMLInputElement).value = String(state.draft.tau_watch);
  ($("action-slider") as HTMLInputElement).value = String(state.draft.tau_action);
  $("whatif-result").innerHTML = "";
  syncDraftUi();
}

async function submitWhatIf(): Promise<void> {
  if (!state.draft || draftProblem(state.draft) !== null) return;
  const out = $("whatif-result");
  try {
    // The live thresholds are never touched: the preview only re-renders
    // monthly rates under the draft pair returned by the server.
    const resp = await api.whatif({
      tau_watch: state.draft.tau_watch,
      tau_action: state.draft.tau_action,
    });
    const plant = state.selectedPlant;
    const rates = plant ? ((resp.monthly_alert_rates[plant] ?? {}) as Record<string, MonthRates>) : {};
    out.innerHTML =
      `<p>preview with WATCH ≥ ${resp.thresholds.tau_watch.toFixed(4)}, ` +
      `ACTION ≥ ${resp.thresholds.tau_action.toFixed(4)}</p>` +
      renderMonthlyRates(rates);
  } catch (err) {
    out.innerHTML = `<p class="error">${err instanceof Error ? err.message : String(err)}</p>`;
  }
}

async function onPlantChange(plant: string): Promise<void> {
  state.selectedPlant = plant;
  await Promise.all([refreshTimeline(), refreshPanels()]);
}

async function boot(): Promise<void> {
  const [plants, thresholds] = await Promise.all([api.plants(), api.thresholds()]);
  state.plants = plants;
  state.liveThresholds = thresholds;
  showLiveThresholds();
  resetDraft();

  const select = $("plant-select") as HTMLSelectElement;
  select.innerHTML = plants.map((p) => `<option value="${p}">${p}</option>`).join("");
  select.addEventListener("change", () => void onPlantChange(select.value));

  const fromInput = $("date-from") as HTMLInputElement;
  const toInput = $("date-to") as HTMLInputElement;
  $("range-apply").addEventListener("click", () => {
    state.dateFrom = fromInput.value || null;
    state.dateTo = toInput.value || null;
    void refreshTimeline();
  });

  const watchSlider = $("watch-slider") as HTMLInputElement;
  const actionSlider = $("action-slider") as HTMLInputElement;
  watchSlider.addEventListener("input", () => {
    if (state.draft) state.draft.tau_watch = Number(watchSlider.value);
    syncDraftUi();
  });
  actionSlider.addEventListener("input", () => {
    if (state.draft) state.draft.tau_action = Number(actionSlider.value);
    syncDraftUi();
  });
  $("whatif-submit").addEventListener("click", () => void submitWhatIf());
  $("whatif-reset").addEventListener("click", resetDraft);

  if (plants.length > 0) {
    select.value = plants[0];
    await onPlantChange(plants[0]);
  }
}

void boot().catch((err) => {
  document.body.insertAdjacentHTML(
    "afterbegin",
    `<p class="error">console failed to load: ${err instanceof Error ? err.message : String(err)}</p>`
  );
});
