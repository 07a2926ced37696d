/** Application wiring: the search-and-explore steering loop.
 *
 * Every displayed value comes from an API response; the client adds no
 * scoring or ranking of its own. Superseded search responses are dropped
 * by sequence number so a slow earlier query can never overwrite a newer
 * result list.
 */

import { ApiClient, ApiError } from "./api.js";
import { DetailPanel } from "./detailPanel.js";
import { renderHits } from "./hitList.js";
import { QueryPanel } from "./queryPanel.js";
import { SuggestScheduler } from "./suggest.js";
import { SemanticViewer } from "./viewer.js";

export class App {
  readonly queryPanel: QueryPanel;
  readonly viewer: SemanticViewer;
  readonly detail: DetailPanel;
  readonly suggester: SuggestScheduler;
  readonly hitsContainer: HTMLElement;
  readonly banner: HTMLElement;

  private searchSeq = 0;
  /** doc ids of the currently displayed hits, in rank order. */
  hitIds: string[] = [];

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    suggestDelayMs = 180,
  ) {
    root.textContent = "";
    const header = document.createElement("header");
    header.className = "app-header";
    const heading = document.createElement("h1");
    heading.textContent = "litexplore";
    this.banner = document.createElement("div");
    this.banner.className = "error-banner";
    this.banner.hidden = true;
    header.append(heading, this.banner);

    const main = document.createElement("main");
    main.className = "app-main";
    const searchColumn = document.createElement("section");
    searchColumn.className = "search-column";
    this.hitsContainer = document.createElement("div");
    this.hitsContainer.className = "hits-container";
    const viewerColumn = document.createElement("section");
    viewerColumn.className = "viewer-column";
    const detailColumn = document.createElement("aside");
    detailColumn.className = "detail-column";
    main.append(searchColumn, viewerColumn, detailColumn);
    root.append(header, main);

    this.queryPanel = new QueryPanel(searchColumn);
    searchColumn.append(this.hitsContainer);
    this.viewer = new SemanticViewer(viewerColumn);
    this.detail = new DetailPanel(detailColumn);
    this.suggester = new SuggestScheduler(client, suggestDelayMs);

    this.queryPanel.onPrefixTyped = (prefix) => {
      this.suggester.request(prefix, (items) => this.queryPanel.setSuggestions(items));
    };
    this.queryPanel.onCommit = () => {
      void this.commitQuery();
    };
    this.queryPanel.onCleared = () => {
      this.searchSeq += 1; // supersede any in-flight search
      this.hitIds = [];
      renderHits(this.hitsContainer, [], () => {});
      this.viewer.setHighlight([]);
    };
    this.viewer.onSelect = (docId) => {
      void this.openDoc(docId);
    };
    this.detail.onNeighborClick = (docId) => {
      void this.openDoc(docId);
      this.viewer.recenter(docId);
    };
    this.detail.onShowOnMap = (docId) => {
      this.viewer.recenter(docId);
    };
  }

  /** Load the projection; a 503 hides the viewer behind a placeholder. */
  async init(): Promise<void> {
    try {
      const projection = await this.client.projection();
      this.viewer.setPoints(projection.points);
    } catch (error) {
      const message =
        error instanceof ApiError && error.status === 503
          ? "semantic map not built yet (projection stage pending)"
          : "semantic map unavailable";
      this.viewer.showUnavailable(message);
    }
  }

  async commitQuery(): Promise<void> {
    const terms = [...this.queryPanel.terms];
    if (terms.length === 0) return;
    const seq = ++this.searchSeq;
    try {
      const response = await this.client.search(terms, this.queryPanel.operator);
      if (seq !== this.searchSeq) return; // superseded
      this.banner.hidden = true;
      this.hitIds = response.hits.map((hit) => hit.doc_id);
      renderHits(this.hitsContainer, response.hits, (docId) => {
        void this.openDoc(docId);
      });
      this.viewer.setHighlight(this.hitIds);
    } catch {
      if (seq !== this.searchSeq) return;
      // non-blocking: previous results stay on screen
      this.banner.textContent = "search failed; showing previous results";
      this.banner.hidden = false;
    }
  }

  async openDoc(docId: string): Promise<void> {
    try {
      const detail = await this.client.doc(docId);
      this.detail.render(detail);
      this.viewer.setSelected(docId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.detail.renderNotFound();
      } else {
        this.banner.textContent = "failed to load document";
        this.banner.hidden = false;
      }
    }
  }
}
