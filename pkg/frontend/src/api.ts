/** Typed client for the specmut session API.
 *
 * The explorer never computes algebra locally: every matrix, arrow list and
 * potential summary shown in the UI is taken verbatim from these responses.
 */

export interface MatrixJson {
  n: number;
  rows: number[][];
}

export interface ArrowJson {
  name: string;
  source: number;
  target: number;
  kind: string;
}

export interface StepJson {
  vertex: number;
  split_ok: boolean;
  two_acyclic: boolean;
  trivial_rank: number;
  matrix: MatrixJson;
  failure: string;
}

export interface SessionState {
  id: string;
  seed: number;
  prime: number;
  trunc: number;
  degrees: number[];
  history: number[];
  matrix: MatrixJson;
  initial_matrix: MatrixJson;
  arrows: ArrowJson[];
  steps: StepJson[];
  can_undo: boolean;
}

export interface PotentialSummary {
  id: string;
  trunc: number;
  terms_by_degree: Record<string, number>;
  potential: { trunc: number; terms: unknown[] };
}

export interface SessionRequest {
  rows?: number[][];
  family?: [number, number];
  prime?: number;
  trunc?: number;
  seed?: number;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

/** Minimal structural subset of fetch, so tests can inject a recording. */
export interface FetchResponse {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponse>;

export class Client {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = fetch as unknown as FetchLike,
  ) {}

  private async request<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const payload = (await res.json()) as Record<string, unknown>;
    if (res.status >= 400) {
      const detail =
        typeof payload?.detail === "string" ? payload.detail : "request failed";
      throw new ApiError(res.status, detail);
    }
    return payload as T;
  }

  createSession(req: SessionRequest): Promise<SessionState> {
    return this.request("POST", "/api/session", req);
  }

  getSession(id: string): Promise<SessionState> {
    return this.request("GET", `/api/session/${id}`);
  }

  mutate(id: string, k: number): Promise<SessionState> {
    return this.request("POST", `/api/session/${id}/mutate`, { k });
  }

  undo(id: string): Promise<SessionState> {
    return this.request("POST", `/api/session/${id}/undo`);
  }

  potential(id: string): Promise<PotentialSummary> {
    return this.request("GET", `/api/session/${id}/potential`);
  }
}
