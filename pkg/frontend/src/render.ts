/** HTML renderers. Each one is a pure function of the state it receives:
 * no DOM reads, no clocks, no randomness, so equal states give equal markup.
 */

import { colorFor, legendKeys } from "./network.js";
import { entityHash, HOME_HASH } from "./router.js";
import type {
  EntityProfile,
  NetworkView,
  QuoteRow,
  SearchResponse,
  StatsResponse,
} from "./types.js";
import type { AppState, EntityState, SpanState } from "./viewmodel.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

function entityLink(id: string, label: string): string {
  return `<a class="entity-link" href="${escapeHtml(entityHash(id))}">${escapeHtml(label)}</a>`;
}

export function spanLabel(span: SpanState): string {
  if (!span.from && !span.to) return "whole archive";
  return `${span.from ?? "start"} to ${span.to ?? "end"}`;
}

function datePickers(span: SpanState): string {
  return [
    `<input id="span-from" type="date" value="${escapeHtml(span.from ?? "")}">`,
    `<input id="span-to" type="date" value="${escapeHtml(span.to ?? "")}">`,
    `<button data-action="apply-span">apply dates</button>`,
    `<button data-action="clear-span">clear</button>`,
  ].join("\n");
}

export function renderSearchResults(results: SearchResponse): string {
  if (results.results.length === 0) {
    return `<p class="empty-state">No entities matched this query in the selected period.</p>`;
  }
  const rows = results.results.map((hit) => {
    const profession = hit.profession
      ? `<span class="profession">${escapeHtml(hit.profession)}</span>`
      : "";
    return [
      `<li class="result-row">`,
      entityLink(hit.entity_id, hit.canonical_name),
      profession,
      `<span class="snippet-count">${hit.snippet_count} snippets</span>`,
      `</li>`,
    ].join("");
  });
  return `<ol class="search-results">${rows.join("\n")}</ol>`;
}

function renderStories(stats: StatsResponse | null): string {
  if (!stats || stats.top_entities.length === 0) {
    return `<p class="empty-state">No recent activity.</p>`;
  }
  const rows = stats.top_entities.map((entity) => {
    const profession = entity.profession
      ? `<span class="profession">${escapeHtml(entity.profession)}</span>`
      : "";
    return `<li class="story-row">${entityLink(entity.entity_id, entity.canonical_name)}${profession}</li>`;
  });
  return [
    `<section class="stories">`,
    `<h2>In the news</h2>`,
    `<ul>${rows.join("\n")}</ul>`,
    `</section>`,
  ].join("\n");
}

function renderHome(state: AppState): string {
  const home = state.home;
  const parts = [
    `<section class="search-box">`,
    `<input id="search-input" type="search" placeholder="Search people in the archive" value="${escapeHtml(home.query)}">`,
    `<button data-action="search">search</button>`,
    datePickers(state.span),
    `</section>`,
  ];
  if (home.searched && home.results) {
    parts.push(`<section class="results">`);
    parts.push(`<h2>Results for "${escapeHtml(home.results.query)}" (${spanLabel(state.span)})</h2>`);
    parts.push(renderSearchResults(home.results));
    parts.push(`</section>`);
  } else {
    parts.push(renderStories(home.stats));
  }
  return parts.join("\n");
}

function renderTimeline(profile: EntityProfile): string {
  const buckets = profile.timeline.buckets;
  if (buckets.length === 0) {
    return `<p class="empty-state">No mentions in this period.</p>`;
  }
  const max = buckets.reduce((m, b) => Math.max(m, b.count), 0);
  const bars = buckets.map((b) => {
    const height = max > 0 ? Math.max(4, Math.round((100 * b.count) / max)) : 4;
    return (
      `<button class="timeline-bar" data-action="select-bucket" ` +
      `data-bucket="${escapeHtml(b.bucket)}" style="height:${height}%" ` +
      `title="${escapeHtml(b.bucket)}: ${b.count}"></button>`
    );
  });
  return `<div class="timeline" role="group">${bars.join("")}</div>`;
}

function renderQuotes(quotes: QuoteRow[]): string {
  if (quotes.length === 0) {
    return `<p class="empty-state">No quotations in this period.</p>`;
  }
  const rows = quotes.map((q) =>
    [
      `<li class="quote-row quote-${escapeHtml(q.kind)}">`,
      `<blockquote>${escapeHtml(q.text)}</blockquote>`,
      `<span class="quote-meta">${escapeHtml(q.published_at.slice(0, 10))} · ${escapeHtml(q.doc_id)}</span>`,
      `</li>`,
    ].join(""),
  );
  return `<ul class="quotes">${rows.join("\n")}</ul>`;
}

export function renderNetworkPanel(view: NetworkView | null): string {
  const parts = [
    `<section class="network-panel">`,
    `<h3>Co-occurrence network</h3>`,
    `<button data-action="close-network">close</button>`,
  ];
  if (!view) {
    parts.push(`<p class="loading">Loading network…</p>`);
  } else if (view.nodes.length === 0) {
    parts.push(`<p class="empty-state">No co-occurrences in this period.</p>`);
  } else {
    parts.push(`<canvas id="network-canvas" width="800" height="520"></canvas>`);
    const legend = legendKeys(view)
      .map(
        (key) =>
          `<li><span class="swatch" style="background:${colorFor(key)}"></span>${escapeHtml(key)}</li>`,
      )
      .join("");
    if (legend) parts.push(`<ul class="legend">${legend}</ul>`);
  }
  parts.push(`</section>`);
  return parts.join("\n");
}

export function renderNotFound(id: string): string {
  return [
    `<section class="not-found">`,
    `<h2>Entity not found</h2>`,
    `<p>No entity with id "${escapeHtml(id)}" exists in this archive.</p>`,
    `<p><a href="${HOME_HASH}">Back to search</a></p>`,
    `</section>`,
  ].join("\n");
}

function renderProfessions(profile: EntityProfile): string {
  if (profile.professions.length === 0) return "";
  const rows = profile.professions
    .map((p) => `<li>${escapeHtml(p.name)} (${p.count})</li>`)
    .join("");
  return `<ul class="professions">${rows}</ul>`;
}

function renderEntityPage(entity: EntityState, span: SpanState): string {
  if (entity.notFound) return renderNotFound(entity.id);
  if (!entity.profile) return `<p class="loading">Loading profile…</p>`;
  const profile = entity.profile;
  const aliases = profile.aliases.filter((a) => a !== profile.canonical_name);
  const articles = profile.articles.map((a) =>
    [
      `<li class="article-row">`,
      `<span class="article-date">${escapeHtml(a.published_at.slice(0, 10))}</span> `,
      `<span class="article-title">${escapeHtml(a.title)}</span>`,
      ` <span class="article-source">${escapeHtml(a.source)}</span>`,
      `</li>`,
    ].join(""),
  );
  const related = profile.related.map(
    (r) =>
      `<li class="related-row">${entityLink(r.entity_id, r.canonical_name)} <span class="weight">${r.weight}</span></li>`,
  );
  const parts = [
    `<section class="entity-head">`,
    `<h2>${escapeHtml(profile.canonical_name)}</h2>`,
    profile.profession ? `<p class="headline-profession">${escapeHtml(profile.profession)}</p>` : "",
    aliases.length ? `<p class="aliases">Also appears as: ${aliases.map(escapeHtml).join(", ")}</p>` : "",
    renderProfessions(profile),
    `<p class="span-label">Showing: ${escapeHtml(spanLabel(span))}</p>`,
    datePickers(span),
    `</section>`,
    `<section class="timeline-panel"><h3>Mentions over time</h3>${renderTimeline(profile)}</section>`,
    `<section class="articles-panel"><h3>Articles (${profile.articles.length})</h3>`,
    articles.length
      ? `<ul class="articles">${articles.join("\n")}</ul>`
      : `<p class="empty-state">No articles in this period.</p>`,
    `</section>`,
    `<section class="quotes-panel"><h3>Quotations</h3>${renderQuotes(entity.quotes?.quotations ?? [])}</section>`,
    `<section class="related-panel"><h3>Related entities</h3>`,
    related.length
      ? `<ul class="related">${related.join("\n")}</ul>`
      : `<p class="empty-state">No related entities in this period.</p>`,
    `</section>`,
    entity.networkOpen
      ? renderNetworkPanel(entity.network)
      : `<button data-action="open-network">view network</button>`,
  ];
  return parts.filter(Boolean).join("\n");
}

export function renderApp(state: AppState): string {
  const banner = state.error
    ? `<div class="error-banner">${escapeHtml(state.error)}</div>`
    : "";
  const busy = state.loading ? `<div class="loading-indicator">Loading…</div>` : "";
  let page: string;
  if (state.route.page === "entity" && state.entity) {
    page = renderEntityPage(state.entity, state.span);
  } else {
    page = renderHome(state);
  }
  return [
    `<header class="top-bar"><a class="brand" href="${HOME_HASH}">chronolens</a></header>`,
    banner,
    busy,
    `<main>${page}</main>`,
  ]
    .filter(Boolean)
    .join("\n");
}
