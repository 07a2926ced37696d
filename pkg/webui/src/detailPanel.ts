/** Document detail: DOI-linked title, metadata, keyphrases, neighbors. */

import type { DocDetail } from "./types.js";

export class DetailPanel {
  readonly root: HTMLElement;

  onNeighborClick: (docId: string) => void = () => {};
  onShowOnMap: (docId: string) => void = () => {};

  constructor(container: HTMLElement) {
    this.root = document.createElement("div");
    this.root.className = "detail-panel";
    this.root.textContent = "select a document";
    container.append(this.root);
  }

  renderNotFound(): void {
    this.root.textContent = "";
    const message = document.createElement("p");
    message.className = "detail-error";
    message.textContent = "document not found";
    this.root.append(message);
  }

  render(detail: DocDetail): void {
    this.root.textContent = "";

    const title = document.createElement(detail.doi ? "a" : "h2");
    title.className = "detail-title";
    title.textContent = detail.title || detail.doc_id;
    if (detail.doi && title instanceof HTMLAnchorElement) {
      title.href = `https://doi.org/${detail.doi}`;
      title.target = "_blank";
      title.rel = "noopener";
    }

    const meta = document.createElement("p");
    meta.className = "detail-meta";
    meta.textContent = [detail.journal, detail.year]
      .filter((v) => v != null)
      .join(", ");

    const mapButton = document.createElement("button");
    mapButton.className = "detail-map-button";
    mapButton.textContent = "show on map";
    mapButton.disabled = detail.coords === null;
    mapButton.addEventListener("click", () => this.onShowOnMap(detail.doc_id));

    const abstract = document.createElement("p");
    abstract.className = "detail-abstract";
    abstract.textContent = detail.abstract;

    const phrasesHeading = document.createElement("h3");
    phrasesHeading.textContent = "keyphrases";
    const phrases = document.createElement("ul");
    phrases.className = "detail-keyphrases";
    for (const phrase of detail.keyphrases) {
      const li = document.createElement("li");
      li.textContent = `${phrase.text} (${phrase.score.toFixed(3)})`;
      phrases.append(li);
    }

    const neighborsHeading = document.createElement("h3");
    neighborsHeading.textContent = "similar documents";
    const neighbors = document.createElement("ul");
    neighbors.className = "detail-neighbors";
    for (const neighbor of detail.neighbors) {
      const li = document.createElement("li");
      const link = document.createElement("a");
      link.href = "#";
      link.className = "neighbor-link";
      link.dataset.docId = neighbor.doc_id;
      link.textContent = `${neighbor.title || neighbor.doc_id} (${neighbor.similarity.toFixed(3)})`;
      link.addEventListener("click", (event) => {
        event.preventDefault();
        this.onNeighborClick(neighbor.doc_id);
      });
      li.append(link);
      neighbors.append(li);
    }

    this.root.append(
      title,
      meta,
      mapButton,
      abstract,
      phrasesHeading,
      phrases,
      neighborsHeading,
      neighbors,
    );
  }
}
