/** Payload shapes of the HTTP API the UI consumes. */

export interface KeyphraseEntry {
  text: string;
  score: number;
}

export interface SearchHit {
  doc_id: string;
  score: number;
  title: string;
  doi: string | null;
  journal: string | null;
  year: number | null;
  keyphrases: KeyphraseEntry[];
}

export interface SearchResponse {
  query: { terms: string[]; op: string; limit: number };
  hits: SearchHit[];
  count: number;
}

export interface SuggestResponse {
  suggestions: string[];
}

export interface NeighborEntry {
  doc_id: string;
  title: string;
  similarity: number;
}

export interface DocDetail {
  doc_id: string;
  title: string;
  abstract: string;
  doi: string | null;
  journal: string | null;
  year: number | null;
  keyphrases: KeyphraseEntry[];
  neighbors: NeighborEntry[];
  coords: { x: number; y: number } | null;
}

export interface ProjectionPoint {
  doc_id: string;
  x: number;
  y: number;
  title: string;
}

export interface ProjectionResponse {
  method: string;
  points: ProjectionPoint[];
}

export interface HealthResponse {
  status: string;
  docs: number;
}

export type Operator = "and" | "or";
