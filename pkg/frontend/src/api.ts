import type {
  CaseRecord,
  GenerateParams,
  ReviewEntry,
  ReviewStatus,
  StatsPayload,
  TaskDetail,
  TaskSummary,
} from "./types.js";

/** Error envelope returned by the service: {code, message}. */
export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError("unreachable", String(err), 0);
    }
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const code = typeof body.code === "string" ? body.code : "error";
      const message = typeof body.message === "string" ? body.message : resp.statusText;
      throw new ApiError(code, message, resp.status);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async tasks(): Promise<TaskSummary[]> {
    const body = await this.request<{ tasks: TaskSummary[] }>("/v1/tasks");
    return body.tasks;
  }

  task(name: string): Promise<TaskDetail> {
    return this.request<TaskDetail>(`/v1/tasks/${encodeURIComponent(name)}`);
  }

  async generate(params: GenerateParams): Promise<CaseRecord[]> {
    const body = await this.post<{ cases: CaseRecord[] }>("/v1/cases:generate", params);
    return body.cases;
  }

  stats(): Promise<StatsPayload> {
    return this.request<StatsPayload>("/v1/stats");
  }

  review(caseId: string, status: ReviewStatus, note: string): Promise<ReviewEntry> {
    return this.post<ReviewEntry>("/v1/reviews", { case_id: caseId, status, note });
  }

  async reviews(status?: ReviewStatus): Promise<ReviewEntry[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    const body = await this.request<{ reviews: ReviewEntry[] }>(`/v1/reviews${query}`);
    return body.reviews;
  }
}
