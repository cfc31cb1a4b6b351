import { describe, expect, it } from "vitest";

import { initialState, RequestTokens } from "../src/state";

describe("initialState", () => {
  it("starts with no user, no panels, no error", () => {
    const state = initialState();
    expect(state.userId).toBeNull();
    expect(state.results).toEqual([]);
    expect(state.panel).toBeNull();
    expect(state.profile).toBeNull();
    expect(state.error).toBeNull();
    expect(state.busy).toBe(0);
  });
});

describe("RequestTokens", () => {
  it("hands out strictly increasing tokens per channel", () => {
    const tokens = new RequestTokens();
    expect(tokens.next("search")).toBe(1);
    expect(tokens.next("search")).toBe(2);
    expect(tokens.next("panels")).toBe(1); // channels are independent
  });

  it("only the newest token is current", () => {
    const tokens = new RequestTokens();
    const first = tokens.next("search");
    expect(tokens.isCurrent("search", first)).toBe(true);
    const second = tokens.next("search");
    expect(tokens.isCurrent("search", first)).toBe(false);
    expect(tokens.isCurrent("search", second)).toBe(true);
  });

  it("unknown channels are never current", () => {
    expect(new RequestTokens().isCurrent("nope", 1)).toBe(false);
  });
});
