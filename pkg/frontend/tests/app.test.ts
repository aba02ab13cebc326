import { afterEach, beforeEach, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { SearchApp } from "../src/app.js";

const SEARCH_FIXTURE = {
  query: "HIV",
  cui: "C0019693",
  condition_name: "HIV",
  variant: "amsterdam",
  // deliberately not in nct_id order: the DOM must keep this order as-is
  results: [
    {
      nct_id: "NCT00000110",
      title: "Zidovudine Maintenance in HIV Infection",
      score: 0.793,
      explanations: ["first reason", "second reason"],
    },
    {
      nct_id: "NCT00000095",
      title: "HIV Infection in Adolescents: Cohort B",
      score: 0.694,
      explanations: ["third reason"],
    },
    {
      nct_id: "NCT00000140",
      title: "a comparative trial of HIV screening strategies",
      score: 0.635,
      explanations: [],
    },
  ],
  total: 10,
};

const DETAIL_FIXTURE = {
  nct_id: "NCT00000110",
  title: "Zidovudine Maintenance in HIV Infection",
  cui: "C0019693",
  trial: {
    brief_summary: "Maintenance dosing after induction.",
    stage: "Phase 2",
    overall_status: "Recruiting",
    primary_purpose: "Treatment",
    publication_count: 6,
  },
  E_it: 0.402,
  E_dtc: 0.391,
  E_ct: 0.793,
  feature_vector: {},
  explanations: [
    { feature: "query_in_detailed_description", text: "first reason", weight: 0.12 },
    { feature: "query_in_summary", text: "second reason", weight: 0.11 },
  ],
};

let fetchMock: ReturnType<typeof vi.fn>;

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function mountApp(): SearchApp {
  document.body.innerHTML = '<div id="app"></div>';
  return new SearchApp(document.getElementById("app") as HTMLElement, new ApiClient(""));
}

function dispatchSubmit(query: string): void {
  const input = document.querySelector(".query-input") as HTMLInputElement;
  input.value = query;
  const form = document.querySelector(".search-form") as HTMLFormElement;
  form.dispatchEvent(new Event("submit", { cancelable: true }));
}

function rowIds(): (string | undefined)[] {
  return [...document.querySelectorAll<HTMLElement>(".result-row")].map((el) => el.dataset.nctId);
}

beforeEach(() => {
  fetchMock = vi.fn();
  vi.stubGlobal("fetch", fetchMock);
});

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.innerHTML = "";
});

it("renders rows in response order with badges and verbatim explanations", async () => {
  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();

  expect(rowIds()).toEqual(["NCT00000110", "NCT00000095", "NCT00000140"]);
  const badges = [...document.querySelectorAll(".score-badge")].map((el) => el.textContent);
  expect(badges).toEqual(["0.793", "0.694", "0.635"]);
  const firstRowLines = [
    ...document.querySelectorAll(".result-row:first-child .explanation"),
  ].map((el) => el.textContent);
  expect(firstRowLines).toEqual(["first reason", "second reason"]);
  expect(document.querySelector(".status")?.textContent).toContain("10");
});

it("issues exactly one request per variant switch", async () => {
  fetchMock.mockResolvedValue(jsonResponse(SEARCH_FIXTURE));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();
  expect(fetchMock).toHaveBeenCalledTimes(1);

  const select = document.querySelector(".variant-select") as HTMLSelectElement;
  select.value = "berlin";
  select.dispatchEvent(new Event("change"));
  await app.settled();

  expect(fetchMock).toHaveBeenCalledTimes(2);
  expect(String(fetchMock.mock.calls[1][0])).toContain("variant=berlin");
});

it("renders no explanation lines when the response carries none", async () => {
  const stripped = {
    ...SEARCH_FIXTURE,
    variant: "berlin",
    results: SEARCH_FIXTURE.results.map((row) => ({ ...row, explanations: [] })),
  };
  fetchMock.mockResolvedValueOnce(jsonResponse(stripped));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();

  expect(rowIds()).toEqual(["NCT00000110", "NCT00000095", "NCT00000140"]);
  expect(document.querySelectorAll(".explanation").length).toBe(0);
});

it("shows clickable suggestion chips that resubmit the corrected query", async () => {
  fetchMock.mockResolvedValueOnce(
    jsonResponse(
      {
        code: "unknown_condition",
        message: "no condition matches 'hivv'",
        suggestions: ["HIV", "HIV disease"],
      },
      404,
    ),
  );
  const app = mountApp();
  dispatchSubmit("hivv");
  await app.settled();

  const chips = [...document.querySelectorAll<HTMLButtonElement>(".chip")];
  expect(chips.map((c) => c.textContent)).toEqual(["HIV", "HIV disease"]);
  expect(document.querySelectorAll(".result-row").length).toBe(0);

  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  chips[0].click();
  await app.settled();

  expect(fetchMock).toHaveBeenCalledTimes(2);
  expect(String(fetchMock.mock.calls[1][0])).toContain("q=HIV");
  expect((document.querySelector(".query-input") as HTMLInputElement).value).toBe("HIV");
  expect(rowIds()).toEqual(["NCT00000110", "NCT00000095", "NCT00000140"]);
});

it("aborts the pending request when a new query is submitted", async () => {
  let firstAborted = false;
  fetchMock.mockImplementationOnce(
    (_url: string, init?: RequestInit) =>
      new Promise<Response>((_, reject) => {
        init?.signal?.addEventListener("abort", () => {
          firstAborted = true;
          reject(new DOMException("aborted", "AbortError"));
        });
      }),
  );
  const app = mountApp();
  dispatchSubmit("HIV"); // hangs until aborted

  fetchMock.mockResolvedValueOnce(jsonResponse({ ...SEARCH_FIXTURE, condition_name: "Lyme Disease" }));
  dispatchSubmit("lyme disease");
  await app.settled();
  await new Promise((resolve) => setTimeout(resolve, 0));

  expect(firstAborted).toBe(true);
  expect(fetchMock).toHaveBeenCalledTimes(2);
  expect(document.querySelector(".status")?.textContent).toContain("Lyme Disease");
});

it("offers a retry banner on network failure and recovers on retry", async () => {
  fetchMock.mockRejectedValueOnce(new TypeError("fetch failed"));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();

  const retry = document.querySelector<HTMLButtonElement>(".banner-retry .banner-action");
  expect(retry).not.toBeNull();
  expect(document.querySelectorAll(".result-row").length).toBe(0);

  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  retry!.click();
  await app.settled();

  expect(rowIds()).toEqual(["NCT00000110", "NCT00000095", "NCT00000140"]);
  expect(document.querySelector(".banner-retry")).toBeNull();
});

it("opens a detail pane whose total matches the row badge and keeps it on later failures", async () => {
  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();

  fetchMock.mockResolvedValueOnce(jsonResponse(DETAIL_FIXTURE));
  (document.querySelector(".result-row") as HTMLElement).click();
  await app.settled();

  const pane = document.querySelector<HTMLElement>(".detail");
  expect(pane?.dataset.nctId).toBe("NCT00000110");
  const badge = document.querySelector(".score-badge")?.textContent;
  expect(pane?.textContent).toContain(badge as string);
  expect(pane?.textContent).toContain("Maintenance dosing after induction.");
  expect(pane?.textContent).toContain("Recruiting");
  expect(pane?.textContent).toContain("Phase 2");
  expect(pane?.textContent).toContain("Treatment");
  expect(pane?.textContent).toContain("6");
  expect(String(fetchMock.mock.calls[1][0])).toContain("/api/trials/NCT00000110");

  // backend down for the next row: toast appears, pane untouched
  fetchMock.mockRejectedValueOnce(new TypeError("fetch failed"));
  (document.querySelectorAll(".result-row")[1] as HTMLElement).click();
  await app.settled();

  expect(document.querySelector(".banner-toast")).not.toBeNull();
  expect(document.querySelector<HTMLElement>(".detail")?.dataset.nctId).toBe("NCT00000110");
});

it("shows an empty-explanations state in the detail pane", async () => {
  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();

  fetchMock.mockResolvedValueOnce(
    jsonResponse({ ...DETAIL_FIXTURE, nct_id: "NCT00000140", explanations: [] }),
  );
  (document.querySelectorAll(".result-row")[2] as HTMLElement).click();
  await app.settled();

  expect(document.querySelector(".detail-empty")?.textContent).toBe("No explanations available");
});

it("offers a list refresh when the opened trial has gone stale", async () => {
  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  const app = mountApp();
  dispatchSubmit("HIV");
  await app.settled();

  fetchMock.mockResolvedValueOnce(
    jsonResponse({ code: "unknown_trial", message: "no trial NCT00000110" }, 404),
  );
  (document.querySelector(".result-row") as HTMLElement).click();
  await app.settled();

  const refresh = document.querySelector<HTMLButtonElement>(".banner-toast .banner-action");
  expect(refresh?.textContent).toBe("Refresh list");

  fetchMock.mockResolvedValueOnce(jsonResponse(SEARCH_FIXTURE));
  refresh!.click();
  await app.settled();
  expect(String(fetchMock.mock.calls.at(-1)?.[0])).toContain("/api/search?q=HIV");
});

it("validates an empty query locally without calling the service", async () => {
  const app = mountApp();
  dispatchSubmit("   ");
  await app.settled();

  expect(fetchMock).not.toHaveBeenCalled();
  expect(document.querySelector(".banner-validation")).not.toBeNull();
});
