// DOM builders. Pure functions from API payloads to elements — the view
// never reorders results or rewrites explanation text.

import { SearchRow, TrialDetail } from "./api.js";

export const VARIANTS = ["amsterdam", "berlin", "copenhagen", "dublin", "edinburgh"] as const;
export type Variant = (typeof VARIANTS)[number];

export function formatScore(score: number): string {
  return score.toFixed(3);
}

export function resultRow(row: SearchRow, rank: number): HTMLLIElement {
  const li = document.createElement("li");
  li.className = "result-row";
  li.dataset.nctId = row.nct_id;

  const header = document.createElement("div");
  header.className = "result-header";

  const rankEl = document.createElement("span");
  rankEl.className = "result-rank";
  rankEl.textContent = String(rank);

  const titleEl = document.createElement("span");
  titleEl.className = "result-title";
  titleEl.textContent = row.title;

  const badge = document.createElement("span");
  badge.className = "score-badge";
  badge.textContent = formatScore(row.score);

  header.append(rankEl, titleEl, badge);
  li.appendChild(header);

  if (row.explanations.length > 0) {
    const lines = document.createElement("ul");
    lines.className = "explanations";
    for (const text of row.explanations) {
      const line = document.createElement("li");
      line.className = "explanation";
      line.textContent = text; // verbatim from the API
      lines.appendChild(line);
    }
    li.appendChild(lines);
  }
  return li;
}

export function resultList(rows: SearchRow[]): HTMLUListElement {
  const list = document.createElement("ul");
  list.className = "results";
  rows.forEach((row, index) => list.appendChild(resultRow(row, index + 1)));
  return list;
}

export function suggestionChips(
  suggestions: string[],
  onPick: (term: string) => void,
): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "suggestions";
  for (const term of suggestions) {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = "chip";
    chip.textContent = term;
    chip.addEventListener("click", () => onPick(term));
    wrap.appendChild(chip);
  }
  return wrap;
}

export function banner(
  kind: "validation" | "retry" | "toast",
  text: string,
  actionLabel?: string,
  onAction?: () => void,
): HTMLElement {
  const el = document.createElement("div");
  el.className = `banner banner-${kind}`;

  const message = document.createElement("span");
  message.textContent = text;
  el.appendChild(message);

  if (actionLabel && onAction) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "banner-action";
    button.textContent = actionLabel;
    button.addEventListener("click", onAction);
    el.appendChild(button);
  }
  return el;
}

function factRow(label: string, value: string | null): HTMLElement {
  const dt = document.createElement("dt");
  dt.textContent = label;
  const dd = document.createElement("dd");
  dd.textContent = value === null || value === "" ? "—" : value;
  const frag = document.createElement("div");
  frag.className = "fact";
  frag.append(dt, dd);
  return frag;
}

export function detailPane(detail: TrialDetail): HTMLElement {
  const pane = document.createElement("section");
  pane.className = "detail";
  pane.dataset.nctId = detail.nct_id;

  const title = document.createElement("h2");
  title.textContent = detail.title;
  pane.appendChild(title);

  const id = document.createElement("p");
  id.className = "detail-id";
  id.textContent = detail.nct_id;
  pane.appendChild(id);

  const breakdown = document.createElement("dl");
  breakdown.className = "breakdown";
  breakdown.append(
    factRow("Query-independent", formatScore(detail.E_it)),
    factRow("Query-dependent", formatScore(detail.E_dtc)),
    factRow("Total score", formatScore(detail.E_ct)),
  );
  pane.appendChild(breakdown);

  const facts = document.createElement("dl");
  facts.className = "facts";
  facts.append(
    factRow("Summary", detail.trial.brief_summary),
    factRow("Status", detail.trial.overall_status),
    factRow("Stage", detail.trial.stage),
    factRow("Purpose", detail.trial.primary_purpose),
    factRow("Publications", String(detail.trial.publication_count)),
  );
  pane.appendChild(facts);

  if (detail.explanations.length > 0) {
    const lines = document.createElement("ul");
    lines.className = "detail-explanations";
    for (const item of detail.explanations) {
      const line = document.createElement("li");
      line.className = "explanation";
      line.textContent = item.text;
      lines.appendChild(line);
    }
    pane.appendChild(lines);
  } else {
    const empty = document.createElement("p");
    empty.className = "detail-empty";
    empty.textContent = "No explanations available";
    pane.appendChild(empty);
  }
  return pane;
}
