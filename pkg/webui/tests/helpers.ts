/** Fixture-backed fetch: replays recorded backend payloads and rejects
 * any request to an endpoint the UI is not documented to use. */

import type { FetchLike, ResponseLike } from "../src/api.js";
import docDetail from "./fixtures/doc_detail.json";
import docNeighbor from "./fixtures/doc_neighbor.json";
import health from "./fixtures/health.json";
import meta from "./fixtures/meta.json";
import projection from "./fixtures/projection.json";
import search1 from "./fixtures/search_1.json";
import search2 from "./fixtures/search_2.json";
import search2Or from "./fixtures/search_2_or.json";
import searchSpikeOr from "./fixtures/search_spike_or.json";
import suggestPrefix from "./fixtures/suggest_prefix.json";

export {
  docDetail,
  docNeighbor,
  health,
  meta,
  projection,
  search1,
  search2,
  search2Or,
  searchSpikeOr,
  suggestPrefix,
};

export interface LoggedRequest {
  url: string;
  path: string;
  params: URLSearchParams;
}

function respond(status: number, body: unknown): ResponseLike {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => body,
  };
}

function collectTerms(params: URLSearchParams): string[] {
  const terms = params.getAll("keyword");
  const numbered: Array<[number, string]> = [];
  for (const [key, value] of params.entries()) {
    const match = /^keyword(\d+)$/.exec(key);
    if (match && Number(match[1]) >= 2) numbered.push([Number(match[1]), value]);
  }
  numbered.sort((a, b) => a[0] - b[0]);
  return terms.concat(numbered.map(([, value]) => value));
}

export interface FixtureOptions {
  projectionUnavailable?: boolean;
  failSearches?: boolean;
}

export function createFixtureFetch(
  log: LoggedRequest[] = [],
  options: FixtureOptions = {},
): { fetchFn: FetchLike; log: LoggedRequest[] } {
  const fetchFn: FetchLike = async (url) => {
    const parsed = new URL(url, "http://fixture.test");
    log.push({ url, path: parsed.pathname, params: parsed.searchParams });

    if (parsed.pathname === "/gp/api/health") return respond(200, health);
    if (parsed.pathname === "/gp/api/projection") {
      return options.projectionUnavailable
        ? respond(503, { error: "pipeline_incomplete", message: "projection not built" })
        : respond(200, projection);
    }
    if (parsed.pathname === "/gp/api/suggest") {
      const q = parsed.searchParams.get("q");
      if (q === null) return respond(400, { error: "missing_query", message: "q required" });
      return respond(200, q === meta.prefix ? suggestPrefix : { suggestions: [] });
    }
    if (parsed.pathname.startsWith("/gp/api/doc/")) {
      const docId = decodeURIComponent(parsed.pathname.slice("/gp/api/doc/".length));
      if (docId === meta.detail_doc) return respond(200, docDetail);
      if (docId === meta.neighbor_doc) return respond(200, docNeighbor);
      return respond(404, { error: "not_found", message: `unknown document: ${docId}` });
    }
    if (parsed.pathname === "/gp/api") {
      if (options.failSearches) throw new Error("network down");
      const terms = collectTerms(parsed.searchParams);
      const op = parsed.searchParams.get("op") ?? "and";
      const key = `${terms.join("+")}|${op}`;
      const canned: Record<string, unknown> = {
        [`spike|or`]: searchSpikeOr,
        [`${meta.term1}|and`]: search1,
        [`${meta.term1}+${meta.term2}|and`]: search2,
        [`${meta.term1}+${meta.term2}|or`]: search2Or,
      };
      if (key in canned) return respond(200, canned[key]);
      return respond(200, {
        query: { terms, op, limit: 50 },
        hits: [],
        count: 0,
      });
    }
    throw new Error(`undocumented endpoint requested: ${url}`);
  };
  return { fetchFn, log };
}

export function flushAsync(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
