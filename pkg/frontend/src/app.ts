/**
 * Application wiring: query entry, concept slate with checkboxes, feedback
 * submission, and a side-by-side baseline vs. re-ranked comparison. All data
 * comes from the HTTP API and is displayed in API order, never resorted.
 */

import { ApiClient, ResultRow, SessionView } from "./api.js";
import {
  hideError,
  renderResults,
  renderSlate,
  selectedConcepts,
  showError,
} from "./view.js";

export const PAGE_SIZE = 10;

interface AppState {
  session: SessionView | null;
  baseline: ResultRow[];
  baselineRanks: Map<string, number>;
  offset: number;
  rerankedTotal: number;
}

export interface AppController {
  startSession(query: string): Promise<void>;
  submit(): Promise<void>;
  goToPage(offset: number): Promise<void>;
  retry(): Promise<void>;
  readonly state: AppState;
}

function el<T extends HTMLElement>(root: Document, id: string): T {
  const node = root.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function initApp(root: Document, api: ApiClient): AppController {
  const queryForm = el<HTMLFormElement>(root, "query-form");
  const queryInput = el<HTMLInputElement>(root, "query-input");
  const banner = el(root, "error-banner");
  const retryBtn = el<HTMLButtonElement>(root, "retry-btn");
  const slateSection = el(root, "slate-section");
  const slateList = el(root, "slate-list");
  const queryEcho = el(root, "query-echo");
  const submitBtn = el<HTMLButtonElement>(root, "submit-btn");
  const compareToggle = el<HTMLInputElement>(root, "compare-toggle");
  const resultsSection = el(root, "results-section");
  const baselineColumn = el(root, "baseline-column");
  const baselineList = el(root, "baseline-list");
  const rerankedList = el(root, "reranked-list");
  const prevBtn = el<HTMLButtonElement>(root, "prev-btn");
  const nextBtn = el<HTMLButtonElement>(root, "next-btn");
  const pageInfo = el(root, "page-info");

  const state: AppState = {
    session: null,
    baseline: [],
    baselineRanks: new Map(),
    offset: 0,
    rerankedTotal: 0,
  };

  // the failed action is kept so the error banner's retry can re-run it
  let lastAction: (() => Promise<void>) | null = null;

  async function guarded(action: () => Promise<void>): Promise<void> {
    lastAction = action;
    hideError(banner);
    try {
      await action();
    } catch (err) {
      showError(banner, err instanceof Error ? err.message : String(err));
    }
  }

  async function startSession(query: string): Promise<void> {
    await guarded(async () => {
      const session = await api.createSession(query);
      // the full pre-feedback ranking is the baseline column; fetched once,
      // before feedback flips what GET /results returns
      const page = await api.getResults(
        session.session_id, 0, Math.max(session.num_baseline, 1),
      );
      state.session = session;
      state.baseline = page.results;
      state.baselineRanks = new Map(page.results.map((r) => [r.doc_id, r.rank]));
      state.offset = 0;
      state.rerankedTotal = 0;
      queryEcho.textContent = session.query;
      renderSlate(slateList, session.slate);
      slateSection.hidden = false;
      resultsSection.hidden = true;
    });
  }

  function renderPage(reranked: ResultRow[]): void {
    const baselinePage = state.baseline.slice(state.offset, state.offset + PAGE_SIZE);
    renderResults(baselineList, baselinePage);
    renderResults(rerankedList, reranked, state.baselineRanks);
    baselineColumn.hidden = !compareToggle.checked;
    const last = Math.min(state.offset + PAGE_SIZE, state.rerankedTotal);
    pageInfo.textContent = `${state.offset + 1}-${last} of ${state.rerankedTotal}`;
    prevBtn.disabled = state.offset === 0;
    nextBtn.disabled = state.offset + PAGE_SIZE >= state.rerankedTotal;
    resultsSection.hidden = false;
  }

  async function submit(): Promise<void> {
    await guarded(async () => {
      if (!state.session) throw new Error("no active session");
      const id = state.session.session_id;
      state.session = await api.submitFeedback(id, selectedConcepts(slateList));
      state.offset = 0;
      const page = await api.getResults(id, 0, PAGE_SIZE);
      state.rerankedTotal = page.total;
      renderPage(page.results);
    });
  }

  async function goToPage(offset: number): Promise<void> {
    await guarded(async () => {
      if (!state.session) throw new Error("no active session");
      state.offset = Math.max(0, offset);
      const page = await api.getResults(state.session.session_id, state.offset, PAGE_SIZE);
      state.rerankedTotal = page.total;
      renderPage(page.results);
    });
  }

  async function retry(): Promise<void> {
    if (lastAction) {
      const action = lastAction;
      hideError(banner);
      try {
        await action();
      } catch (err) {
        showError(banner, err instanceof Error ? err.message : String(err));
      }
    }
  }

  queryForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void startSession(queryInput.value);
  });
  submitBtn.addEventListener("click", () => void submit());
  retryBtn.addEventListener("click", () => void retry());
  prevBtn.addEventListener("click", () => void goToPage(state.offset - PAGE_SIZE));
  nextBtn.addEventListener("click", () => void goToPage(state.offset + PAGE_SIZE));
  compareToggle.addEventListener("change", () => {
    baselineColumn.hidden = !compareToggle.checked;
  });

  return { startSession, submit, goToPage, retry, state };
}
