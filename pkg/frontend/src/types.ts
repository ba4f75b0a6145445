/** Payload shapes of the archive JSON API, mirrored field for field. */

export interface Span {
  from: string | null;
  to: string | null;
}

export interface SearchHit {
  entity_id: string;
  canonical_name: string;
  profession: string;
  score: number;
  snippet_count: number;
}

export interface SearchResponse {
  query: string;
  span: Span;
  results: SearchHit[];
}

export interface ArticleRow {
  doc_id: string;
  source: string;
  category: string;
  title: string;
  published_at: string;
}

export interface ProfessionRow {
  name: string;
  count: number;
}

export interface RelatedRow {
  entity_id: string;
  canonical_name: string;
  weight: number;
}

export interface TimelineBucket {
  bucket: string;
  count: number;
}

export interface Timeline {
  granularity: string;
  buckets: TimelineBucket[];
}

export interface QuoteRow {
  doc_id: string;
  sentence_index: number;
  kind: string;
  text: string;
  published_at: string;
}

export interface EntityProfile {
  entity_id: string;
  canonical_name: string;
  aliases: string[];
  profession: string;
  professions: ProfessionRow[];
  first_seen: string | null;
  last_seen: string | null;
  span: Span;
  articles: ArticleRow[];
  quotations: QuoteRow[];
  related: RelatedRow[];
  timeline: Timeline;
}

export interface QuotesResponse {
  entity_id: string;
  canonical_name: string;
  span: Span;
  quotations: QuoteRow[];
}

export interface NetworkNode {
  id: string;
  label: string;
  weight: number;
  color_key: string;
  pos?: { x: number; y: number };
}

export interface NetworkEdge {
  a: string;
  b: string;
  weight: number;
}

export interface NetworkView {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
  span: Span;
}

export interface StatsEntity {
  entity_id: string;
  canonical_name: string;
  profession: string;
  snippet_count: number;
}

export interface StatsResponse {
  generation: number;
  articles: number;
  entities: number;
  quotations: number;
  span: Span;
  top_entities: StatsEntity[];
}
