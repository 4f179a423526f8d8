import type { AlertStateName, Thresholds } from "./types.js";

// Mirror of the server-side threshold invariants; the console only
// pre-validates drafts, it never recomputes risk itself.
export const MIN_GAP = 0.04;
export const WATCH_BOUNDS: [number, number] = [0.05, 0.95];
export const ACTION_BOUNDS: [number, number] = [0.05, 0.99];

export interface ThresholdDraft {
  tau_watch: number;
  tau_action: number;
}

export interface ConsoleState {
  plants: string[];
  selectedPlant: string | null;
  dateFrom: string | null;
  dateTo: string | null;
  liveThresholds: Thresholds | null;
  draft: ThresholdDraft | null;
}

export function initialState(): ConsoleState {
  return {
    plants: [],
    selectedPlant: null,
    dateFrom: null,
    dateTo: null,
    liveThresholds: null,
    draft: null,
  };
}

/** Why a draft cannot be submitted, or null when it is valid. */
export function draftProblem(draft: ThresholdDraft): string | null {
  const { tau_watch, tau_action } = draft;
  if (!Number.isFinite(tau_watch) || !Number.isFinite(tau_action)) {
    return "thresholds must be numbers";
  }
  if (tau_watch < WATCH_BOUNDS[0] || tau_watch > WATCH_BOUNDS[1]) {
    return `WATCH threshold must lie in [${WATCH_BOUNDS[0]}, ${WATCH_BOUNDS[1]}]`;
  }
  if (tau_action < ACTION_BOUNDS[0] || tau_action > ACTION_BOUNDS[1]) {
    return `ACTION threshold must lie in [${ACTION_BOUNDS[0]}, ${ACTION_BOUNDS[1]}]`;
  }
  if (tau_action - tau_watch < MIN_GAP - 1e-12) {
    return `ACTION must exceed WATCH by at least ${MIN_GAP}`;
  }
  return null;
}

export function draftFromLive(live: Thresholds): ThresholdDraft {
  return { tau_watch: live.tau_watch, tau_action: live.tau_action };
}

/** Same boundary semantics as the backend: inclusive lower bounds. */
export function classify(p: number, thr: ThresholdDraft): AlertStateName {
  if (p >= thr.tau_action) return "ACTION";
  if (p >= thr.tau_watch) return "WATCH";
  return "NORMAL";
}
