// Wires API, state, and rendering; owns the stale-response guard.

import { ApiClient, ApiError } from "./api";
import { render } from "./render";
import { initialState, RequestTokens, type ViewState } from "./state";

const TOP_N = 10;
const FLAT_K = 5;
const PER_CLASS = 2;

export class Controller {
  state: ViewState = initialState();
  private readonly tokens = new RequestTokens();

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  init(): void {
    this.root.addEventListener("submit", (event) => {
      const form = event.target as HTMLFormElement;
      event.preventDefault();
      const action = form.dataset["action"];
      if (action === "create-user") {
        const input = form.elements.namedItem("user_id") as HTMLInputElement;
        void this.createUser(input.value.trim());
      } else if (action === "search") {
        const input = form.elements.namedItem("q") as HTMLInputElement;
        void this.submitSearch(input.value);
      }
    });
    this.root.addEventListener("click", (event) => {
      const row = (event.target as HTMLElement).closest<HTMLElement>("[data-action='click-university']");
      if (row?.dataset["name"]) void this.clickUniversity(row.dataset["name"]);
    });
    this.root.addEventListener("change", (event) => {
      const select = event.target as HTMLSelectElement;
      if (select.dataset["action"] === "class-toggle") {
        void this.setClassAttribute(select.value === "" ? null : select.value);
      }
    });
    this.apply({});
  }

  private apply(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    this.root.innerHTML = render(this.state);
  }

  private fail(error: unknown): void {
    const message = error instanceof ApiError ? error.message : String(error);
    this.apply({ error: message, busy: Math.max(0, this.state.busy - 1) });
  }

  async createUser(userId: string): Promise<void> {
    if (!userId) {
      this.apply({ error: "user id must not be empty" });
      return;
    }
    this.apply({ busy: this.state.busy + 1, error: null });
    try {
      const profile = await this.api.createUser(userId);
      this.apply({ userId, profile, busy: this.state.busy - 1 });
      await this.refreshPanels();
    } catch (error) {
      this.fail(error);
    }
  }

  async submitSearch(query: string): Promise<void> {
    if (!query.trim()) return; // empty query: no API call, no state change
    if (!this.state.userId) {
      this.apply({ error: "create or select a user before searching" });
      return;
    }
    const token = this.tokens.next("search");
    this.apply({ busy: this.state.busy + 1, error: null });
    try {
      const response = await this.api.search(query, this.state.userId);
      if (!this.tokens.isCurrent("search", token)) {
        this.apply({ busy: this.state.busy - 1 });
        return; // superseded by a newer search; discard
      }
      this.apply({ query, results: response.results, busy: this.state.busy - 1 });
      await this.refreshPanels(); // the server applied a search event
    } catch (error) {
      if (this.tokens.isCurrent("search", token)) this.fail(error);
      else this.apply({ busy: this.state.busy - 1 });
    }
  }

  async clickUniversity(name: string): Promise<void> {
    if (!this.state.userId) {
      this.apply({ error: "create or select a user before clicking results" });
      return;
    }
    this.apply({ busy: this.state.busy + 1, error: null });
    try {
      await this.api.clickUniversity(this.state.userId, name);
      const detail = await this.api.university(name);
      this.apply({ detail, busy: this.state.busy - 1 });
      await this.refreshPanels();
    } catch (error) {
      this.fail(error);
    }
  }

  async setClassAttribute(attribute: string | null): Promise<void> {
    this.apply({ classAttribute: attribute });
    await this.refreshPanels();
  }

  async refreshPanels(): Promise<void> {
    const userId = this.state.userId;
    if (!userId) return;
    const token = this.tokens.next("panels");
    this.apply({ busy: this.state.busy + 1 });
    try {
      const attribute = this.state.classAttribute;
      const [panel, profile] = await Promise.all([
        attribute === null
          ? this.api
              .recommendations(userId, FLAT_K)
              .then((r) => ({ kind: "flat", items: r.recommendations }) as const)
          : this.api
              .classRecommendations(userId, attribute, PER_CLASS)
              .then((r) => ({ kind: "classes", attribute, buckets: r.classes }) as const),
        this.api.profile(userId, TOP_N),
      ]);
      if (!this.tokens.isCurrent("panels", token)) {
        this.apply({ busy: this.state.busy - 1 });
        return;
      }
      this.apply({ panel, profile, busy: this.state.busy - 1 });
    } catch (error) {
      if (this.tokens.isCurrent("panels", token)) this.fail(error);
      else this.apply({ busy: this.state.busy - 1 });
    }
  }
}
