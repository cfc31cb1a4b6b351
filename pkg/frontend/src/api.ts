// Typed client for the recommendation service HTTP/JSON API.

export interface FeatureTheta {
  feature: string;
  theta: number;
}

export interface ProfileView {
  user_id: string;
  explicit: Record<string, unknown>;
  event_count: number;
  last_event_id: number;
  updated_at: string;
  top_features: FeatureTheta[];
}

export interface SearchRow {
  name: string;
  match_count: number;
}

export interface SearchResponse {
  query: string;
  results: SearchRow[];
}

export interface Recommendation {
  name: string;
  score: number;
  matched_features: FeatureTheta[];
  class_labels: Record<string, string>;
}

export interface RecommendationsResponse {
  user_id: string;
  k: number;
  recommendations: Recommendation[];
}

export interface ClassRecommendationsResponse {
  user_id: string;
  attribute: string;
  classes: Record<string, Recommendation[]>;
}

export interface UniversityView {
  name: string;
  values: Record<string, string | number | null>;
}

export interface EventAck {
  event_id: number | null;
  event_ids: number[];
  event_count: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (error) {
      throw new ApiError(0, "network", `service unreachable: ${String(error)}`);
    }
    const body = (await response.json()) as T & { code?: string; message?: string };
    if (!response.ok) {
      throw new ApiError(response.status, body.code ?? "error", body.message ?? response.statusText);
    }
    return body;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createUser(userId: string, seeds: string[] = []): Promise<ProfileView> {
    return this.post<ProfileView>("/users", { user_id: userId, seeds });
  }

  // the one GET with a server-side effect: with `user` set it appends a search event
  search(query: string, userId?: string): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query });
    if (userId) params.set("user", userId);
    return this.request<SearchResponse>(`/search?${params}`);
  }

  clickUniversity(userId: string, name: string): Promise<EventAck> {
    return this.post<EventAck>(`/users/${encodeURIComponent(userId)}/events`, {
      kind: "click",
      payload: { university: name },
    });
  }

  recommendations(userId: string, k: number): Promise<RecommendationsResponse> {
    const params = new URLSearchParams({ k: String(k) });
    return this.request<RecommendationsResponse>(
      `/users/${encodeURIComponent(userId)}/recommendations?${params}`,
    );
  }

  classRecommendations(
    userId: string,
    attribute: string,
    perClass: number,
  ): Promise<ClassRecommendationsResponse> {
    const params = new URLSearchParams({ k: String(perClass), class_attribute: attribute });
    return this.request<ClassRecommendationsResponse>(
      `/users/${encodeURIComponent(userId)}/recommendations?${params}`,
    );
  }

  profile(userId: string, topN = 10): Promise<ProfileView> {
    const params = new URLSearchParams({ n: String(topN) });
    return this.request<ProfileView>(`/users/${encodeURIComponent(userId)}/profile?${params}`);
  }

  university(name: string): Promise<UniversityView> {
    const params = new URLSearchParams({ name });
    return this.request<UniversityView>(`/universities?${params}`);
  }
}
