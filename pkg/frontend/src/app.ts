// Wires the static page to the API client. State is exactly the current
// query, variant, and selected trial — nothing else is kept, and every
// variant switch or resubmission goes back to the server.

import { ApiClient, ApiError, SearchResponse } from "./api.js";
import { VARIANTS, Variant, banner, detailPane, resultList, suggestionChips } from "./render.js";

function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

export class SearchApp {
  private readonly api: ApiClient;
  private query = "";
  private variant: Variant = "amsterdam";
  private selection: string | null = null;

  private inflight: AbortController | null = null;
  private lastOp: Promise<void> = Promise.resolve();

  private input!: HTMLInputElement;
  private select!: HTMLSelectElement;
  private messagesEl!: HTMLElement;
  private statusEl!: HTMLElement;
  private resultsHost!: HTMLElement;
  private detailHost!: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient) {
    this.api = api;
    this.mount(root);
  }

  /** Resolves when the most recently started request has settled. */
  settled(): Promise<void> {
    return this.lastOp;
  }

  private track(op: Promise<void>): void {
    this.lastOp = op;
  }

  private mount(root: HTMLElement): void {
    root.innerHTML = `
      <form class="search-form">
        <input class="query-input" type="search" placeholder="condition, e.g. HIV"
               aria-label="condition query" />
        <select class="variant-select" aria-label="engine variant">
          ${VARIANTS.map((v) => `<option value="${v}">${v}</option>`).join("")}
        </select>
        <button type="submit" class="search-button">Search</button>
      </form>
      <div class="messages"></div>
      <p class="status"></p>
      <div class="layout">
        <div class="results-host"></div>
        <aside class="detail-host"></aside>
      </div>`;

    this.input = root.querySelector(".query-input") as HTMLInputElement;
    this.select = root.querySelector(".variant-select") as HTMLSelectElement;
    this.messagesEl = root.querySelector(".messages") as HTMLElement;
    this.statusEl = root.querySelector(".status") as HTMLElement;
    this.resultsHost = root.querySelector(".results-host") as HTMLElement;
    this.detailHost = root.querySelector(".detail-host") as HTMLElement;

    const form = root.querySelector(".search-form") as HTMLFormElement;
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.track(this.submitQuery(this.input.value));
    });

    this.select.addEventListener("change", () => {
      this.variant = this.select.value as Variant;
      if (this.query) {
        this.track(this.runSearch()); // exactly one request per switch
      }
    });

    this.resultsHost.addEventListener("click", (event) => {
      const row = (event.target as HTMLElement).closest<HTMLElement>(".result-row");
      if (row && row.dataset.nctId) {
        this.track(this.openTrial(row.dataset.nctId));
      }
    });
  }

  async submitQuery(raw: string): Promise<void> {
    const query = raw.trim();
    if (!query) {
      this.showMessage(banner("validation", "Enter a condition to search for"));
      return;
    }
    this.query = query;
    await this.runSearch();
  }

  private async runSearch(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.clearMessages();
    try {
      const response = await this.api.search(this.query, this.variant, controller.signal);
      if (controller.signal.aborted) return; // a newer submission took over
      this.renderResults(response);
    } catch (err) {
      if (isAbort(err) || controller.signal.aborted) return;
      this.renderSearchError(err);
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  private renderResults(response: SearchResponse): void {
    this.statusEl.textContent =
      `${response.total} trial(s) for “${response.condition_name}” · ${response.variant}`;
    this.resultsHost.replaceChildren(resultList(response.results));
  }

  private renderSearchError(err: unknown): void {
    this.resultsHost.replaceChildren();
    this.statusEl.textContent = "";
    if (err instanceof ApiError && err.code === "unknown_condition") {
      const box = banner("validation", err.message);
      if (err.suggestions.length > 0) {
        box.appendChild(
          suggestionChips(err.suggestions, (term) => {
            this.input.value = term;
            this.track(this.submitQuery(term));
          }),
        );
      }
      this.showMessage(box);
    } else if (err instanceof ApiError && err.status === 400) {
      this.showMessage(banner("validation", err.message));
    } else {
      this.showMessage(
        banner("retry", "The search service could not be reached.", "Retry", () => {
          this.track(this.runSearch());
        }),
      );
    }
  }

  private async openTrial(nctId: string): Promise<void> {
    this.selection = nctId;
    try {
      const detail = await this.api.trial(nctId, this.query);
      if (this.selection !== nctId) return; // another row was opened meanwhile
      this.detailHost.replaceChildren(detailPane(detail));
    } catch (err) {
      if (isAbort(err)) return;
      if (err instanceof ApiError && err.status === 404) {
        this.showMessage(
          banner("toast", `${nctId} is no longer available.`, "Refresh list", () => {
            this.track(this.runSearch());
          }),
        );
      } else {
        // keep whatever the pane currently shows
        this.showMessage(banner("toast", "Could not load trial details."));
      }
    }
  }

  private showMessage(el: HTMLElement): void {
    this.messagesEl.replaceChildren(el);
  }

  private clearMessages(): void {
    this.messagesEl.replaceChildren();
  }
}
