/** Pure DOM rendering. Every list is rendered verbatim in API order. */

import type { ResultRow, SlateItem } from "./api.js";

export function renderSlate(container: HTMLElement, slate: SlateItem[]): void {
  container.textContent = "";
  if (slate.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-slate";
    empty.textContent = "No concepts found. You can still submit with nothing selected.";
    container.appendChild(empty);
    return;
  }
  const list = document.createElement("ul");
  list.className = "slate";
  for (const item of slate) {
    const li = document.createElement("li");
    li.dataset.conceptId = item.concept_id;

    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.className = "concept-box";
    box.value = item.concept_id;
    label.appendChild(box);
    label.appendChild(document.createTextNode(" " + item.title));
    li.appendChild(label);

    if (item.url) {
      const link = document.createElement("a");
      link.href = item.url;
      link.target = "_blank";
      link.rel = "noopener";
      link.className = "concept-link";
      link.textContent = "article";
      li.appendChild(document.createTextNode(" "));
      li.appendChild(link);
    }
    list.appendChild(li);
  }
  container.appendChild(list);
}

/** Checked concept ids, in slate order. */
export function selectedConcepts(container: HTMLElement): string[] {
  const boxes = container.querySelectorAll<HTMLInputElement>("input.concept-box");
  return Array.from(boxes).filter((b) => b.checked).map((b) => b.value);
}

/**
 * Rank-change marker for a re-ranked row: positive numbers moved up,
 * negative moved down, 0 unchanged, null not in the baseline page set.
 */
export function rankChange(row: ResultRow, baselineRanks: Map<string, number>): number | null {
  const before = baselineRanks.get(row.doc_id);
  if (before === undefined) return null;
  return before - row.rank;
}

function changeMarker(change: number | null): string {
  if (change === null) return "new";
  if (change > 0) return `+${change}`;
  if (change < 0) return String(change);
  return "=";
}

export function renderResults(
  container: HTMLElement,
  rows: ResultRow[],
  baselineRanks?: Map<string, number>,
): void {
  container.textContent = "";
  const list = document.createElement("ol");
  list.className = "results";
  for (const row of rows) {
    const li = document.createElement("li");
    li.dataset.rank = String(row.rank);
    li.dataset.docId = row.doc_id;

    const head = document.createElement("div");
    head.className = "result-head";
    const rank = document.createElement("span");
    rank.className = "rank";
    rank.textContent = String(row.rank);
    head.appendChild(rank);
    const title = document.createElement("span");
    title.className = "title";
    title.textContent = row.title || row.doc_id;
    head.appendChild(title);
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = row.score.toFixed(4);
    head.appendChild(score);
    if (baselineRanks) {
      const marker = document.createElement("span");
      const change = rankChange(row, baselineRanks);
      marker.className =
        "change " + (change === null ? "in" : change > 0 ? "up" : change < 0 ? "down" : "same");
      marker.textContent = changeMarker(change);
      head.appendChild(marker);
    }
    li.appendChild(head);

    const snippet = document.createElement("p");
    snippet.className = "snippet";
    snippet.textContent = row.snippet;
    li.appendChild(snippet);
    list.appendChild(li);
  }
  container.appendChild(list);
}

export function showError(banner: HTMLElement, message: string): void {
  const text = banner.querySelector(".error-text");
  if (text) text.textContent = message;
  banner.hidden = false;
}

export function hideError(banner: HTMLElement): void {
  banner.hidden = true;
}
