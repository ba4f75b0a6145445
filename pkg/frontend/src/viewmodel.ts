/** Application state and the actions that drive it.
 *
 * Every fetching action takes a fresh generation token; a response is applied
 * only if no newer action started in the meantime, so slow replies can never
 * overwrite the state of a later interaction.
 */

import { ApiClient, ApiError, type SpanQuery } from "./api.js";
import type { Route } from "./router.js";
import type {
  EntityProfile,
  NetworkView,
  QuotesResponse,
  SearchResponse,
  StatsResponse,
} from "./types.js";

export interface SpanState {
  from: string | null;
  to: string | null;
}

export interface HomeState {
  stats: StatsResponse | null;
  query: string;
  results: SearchResponse | null;
  searched: boolean;
}

export interface EntityState {
  id: string;
  profile: EntityProfile | null;
  quotes: QuotesResponse | null;
  network: NetworkView | null;
  networkOpen: boolean;
  notFound: boolean;
}

export interface AppState {
  route: Route;
  span: SpanState;
  loading: boolean;
  error: string | null;
  home: HomeState;
  entity: EntityState | null;
}

export function initialState(): AppState {
  return {
    route: { page: "home" },
    span: { from: null, to: null },
    loading: false,
    error: null,
    home: { stats: null, query: "", results: null, searched: false },
    entity: null,
  };
}

function describeError(err: unknown): string {
  if (err instanceof Error) return err.message;
  return String(err);
}

export class ViewModel {
  private state: AppState = initialState();
  private generation = 0;
  private listeners: Array<(state: AppState) => void> = [];

  constructor(private readonly api: ApiClient) {}

  getState(): AppState {
    return this.state;
  }

  subscribe(listener: (state: AppState) => void): void {
    this.listeners.push(listener);
  }

  private publish(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private fresh(token: number): boolean {
    return token === this.generation;
  }

  private spanQuery(): SpanQuery {
    return { from: this.state.span.from, to: this.state.span.to };
  }

  routeTo(route: Route): Promise<void> {
    if (route.page === "entity") return this.openEntity(route.id);
    return this.goHome();
  }

  async goHome(): Promise<void> {
    const token = ++this.generation;
    const haveStats = this.state.home.stats !== null;
    this.publish({
      route: { page: "home" },
      entity: null,
      loading: !haveStats,
      error: null,
    });
    if (haveStats) return;
    try {
      const stats = await this.api.stats();
      if (!this.fresh(token)) return;
      this.publish({ loading: false, home: { ...this.state.home, stats } });
    } catch (err) {
      if (!this.fresh(token)) return;
      this.publish({ loading: false, error: describeError(err) });
    }
  }

  async search(query: string): Promise<void> {
    const token = ++this.generation;
    this.publish({
      loading: true,
      error: null,
      home: { ...this.state.home, query, searched: true },
    });
    await this.runSearch(token, query);
  }

  private async runSearch(token: number, query: string): Promise<void> {
    try {
      const results = await this.api.search(query, this.spanQuery());
      if (!this.fresh(token)) return;
      this.publish({ loading: false, home: { ...this.state.home, results } });
    } catch (err) {
      if (!this.fresh(token)) return;
      this.publish({ loading: false, error: describeError(err) });
    }
  }

  /** Open an entity page. The span resets so the profile starts unfiltered. */
  async openEntity(id: string): Promise<void> {
    const token = ++this.generation;
    this.publish({
      route: { page: "entity", id },
      span: { from: null, to: null },
      loading: true,
      error: null,
      entity: {
        id,
        profile: null,
        quotes: null,
        network: null,
        networkOpen: false,
        notFound: false,
      },
    });
    await this.loadEntity(token);
  }

  /** Re-query every open panel with one span so shown always equals queried. */
  async setSpan(from: string | null, to: string | null): Promise<void> {
    const token = ++this.generation;
    this.publish({ span: { from, to }, loading: true, error: null });
    if (this.state.route.page === "entity") {
      await this.loadEntity(token);
    } else if (this.state.home.searched && this.state.home.query) {
      await this.runSearch(token, this.state.home.query);
    } else {
      this.publish({ loading: false });
    }
  }

  private async loadEntity(token: number): Promise<void> {
    const entity = this.state.entity;
    if (!entity) return;
    const span = this.spanQuery();
    const wantNetwork = entity.networkOpen;
    try {
      const [profile, quotes, network] = await Promise.all([
        this.api.entity(entity.id, span),
        this.api.quotes(entity.id, span),
        wantNetwork
          ? this.api.network({ entityId: entity.id, span, layout: true })
          : Promise.resolve<NetworkView | null>(null),
      ]);
      if (!this.fresh(token)) return;
      this.publish({
        loading: false,
        entity: { ...this.state.entity!, profile, quotes, network },
      });
    } catch (err) {
      this.failEntity(token, err);
    }
  }

  async openNetwork(): Promise<void> {
    const entity = this.state.entity;
    if (this.state.route.page !== "entity" || !entity) return;
    const token = ++this.generation;
    this.publish({
      loading: true,
      error: null,
      entity: { ...entity, networkOpen: true, network: null },
    });
    try {
      const network = await this.api.network({
        entityId: entity.id,
        span: this.spanQuery(),
        layout: true,
      });
      if (!this.fresh(token)) return;
      this.publish({ loading: false, entity: { ...this.state.entity!, network } });
    } catch (err) {
      this.failEntity(token, err);
    }
  }

  closeNetwork(): void {
    const entity = this.state.entity;
    if (!entity) return;
    this.publish({ entity: { ...entity, networkOpen: false, network: null } });
  }

  private failEntity(token: number, err: unknown): void {
    if (!this.fresh(token)) return;
    if (err instanceof ApiError && err.code === "unknown_entity" && this.state.entity) {
      this.publish({ loading: false, entity: { ...this.state.entity, notFound: true } });
      return;
    }
    this.publish({ loading: false, error: describeError(err) });
  }
}
