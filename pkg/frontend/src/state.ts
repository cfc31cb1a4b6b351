// ViewState and its pure transitions; rendering consumes this and nothing else.

import type { ProfileView, Recommendation, SearchRow, UniversityView } from "./api";

export type RecommendationPanel =
  | { kind: "flat"; items: Recommendation[] }
  | { kind: "classes"; attribute: string; buckets: Record<string, Recommendation[]> };

export interface ViewState {
  userId: string | null;
  query: string;
  results: SearchRow[];
  panel: RecommendationPanel | null;
  classAttribute: string | null; // diversification toggle; null = flat panel
  profile: ProfileView | null;
  detail: UniversityView | null;
  error: string | null;
  busy: number; // in-flight request count
}

export function initialState(): ViewState {
  return {
    userId: null,
    query: "",
    results: [],
    panel: null,
    classAttribute: null,
    profile: null,
    detail: null,
    error: null,
    busy: 0,
  };
}

// Monotonic per-channel tokens; a response is applied only while its token
// is still the channel's latest, so an overlapping newer request wins.
export class RequestTokens {
  private latest = new Map<string, number>();

  next(channel: string): number {
    const token = (this.latest.get(channel) ?? 0) + 1;
    this.latest.set(channel, token);
    return token;
  }

  isCurrent(channel: string, token: number): boolean {
    return this.latest.get(channel) === token;
  }
}
