// Thin client over the search service. All shapes mirror the JSON the
// server sends; nothing here reorders or recomputes.

export interface SearchRow {
  nct_id: string;
  title: string;
  score: number;
  explanations: string[];
}

export interface SearchResponse {
  query: string;
  cui: string;
  condition_name: string;
  variant: string;
  results: SearchRow[];
  total: number;
}

export interface ExplanationDetail {
  feature: string;
  text: string;
  weight: number;
}

export interface TrialFacts {
  brief_summary: string;
  stage: string | null;
  overall_status: string | null;
  primary_purpose: string | null;
  publication_count: number;
}

export interface TrialDetail {
  nct_id: string;
  title: string;
  cui: string;
  trial: TrialFacts;
  E_it: number;
  E_dtc: number;
  E_ct: number;
  feature_vector: Record<string, { raw: number; score: number }>;
  explanations: ExplanationDetail[];
}

/** Error body from the service: top-level code/message, suggestions on 404s. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly suggestions: string[];

  constructor(status: number, code: string, message: string, suggestions: string[] = []) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.suggestions = suggestions;
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal, headers: { Accept: "application/json" } });
  if (!response.ok) {
    let code = "http_error";
    let message = `request failed with status ${response.status}`;
    let suggestions: string[] = [];
    try {
      const body = await response.json();
      if (body && typeof body.code === "string") code = body.code;
      if (body && typeof body.message === "string") message = body.message;
      if (body && Array.isArray(body.suggestions)) suggestions = body.suggestions;
    } catch {
      // non-JSON error body; the defaults above are enough
    }
    throw new ApiError(response.status, code, message, suggestions);
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  private readonly baseUrl: string;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl;
  }

  search(query: string, variant: string, signal?: AbortSignal): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query, variant });
    return getJson(`${this.baseUrl}/api/search?${params}`, signal);
  }

  trial(nctId: string, query: string, signal?: AbortSignal): Promise<TrialDetail> {
    const params = new URLSearchParams({ q: query });
    return getJson(`${this.baseUrl}/api/trials/${encodeURIComponent(nctId)}?${params}`, signal);
  }
}
