/** Typed client for the retrieval service's HTTP/JSON API. */

export interface SlateItem {
  concept_id: string;
  title: string;
  url: string | null;
  score: number;
}

export interface SessionView {
  session_id: string;
  query: string;
  step: string;
  slate: SlateItem[];
  selected_concepts: string[];
  num_baseline: number;
  num_results: number;
}

export interface ResultRow {
  rank: number;
  doc_id: string;
  title: string;
  snippet: string;
  score: number;
}

export interface ResultsPage {
  session_id: string;
  offset: number;
  limit: number;
  total: number;
  results: ResultRow[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + path, {
        headers: { "content-type": "application/json" },
        ...init,
      });
    } catch (err) {
      throw new ApiError(0, "network_error", String(err));
    }
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      throw new ApiError(resp.status, body.code ?? "error", body.message ?? resp.statusText);
    }
    return body as T;
  }

  createSession(query: string): Promise<SessionView> {
    return this.request<SessionView>("/api/sessions", {
      method: "POST",
      body: JSON.stringify({ query }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>(`/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  submitFeedback(sessionId: string, selected: string[]): Promise<SessionView> {
    return this.request<SessionView>(
      `/api/sessions/${encodeURIComponent(sessionId)}/feedback`,
      { method: "POST", body: JSON.stringify({ selected }) },
    );
  }

  getResults(sessionId: string, offset = 0, limit = 10): Promise<ResultsPage> {
    return this.request<ResultsPage>(
      `/api/sessions/${encodeURIComponent(sessionId)}/results?offset=${offset}&limit=${limit}`,
    );
  }

  health(): Promise<{ status: string; num_docs: number; num_concepts: number }> {
    return this.request("/api/health");
  }
}
