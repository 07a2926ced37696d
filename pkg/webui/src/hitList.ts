/** Ranked hit list rendering; a pure view over the search response. */

import type { SearchHit } from "./types.js";

export function renderHits(
  container: HTMLElement,
  hits: SearchHit[],
  onOpen: (docId: string) => void,
): void {
  container.textContent = "";
  if (hits.length === 0) {
    const empty = document.createElement("p");
    empty.className = "hits-empty";
    empty.textContent = "no results";
    container.append(empty);
    return;
  }
  const list = document.createElement("ol");
  list.className = "hit-list";
  for (const hit of hits) {
    const item = document.createElement("li");
    item.className = "hit";
    item.dataset.docId = hit.doc_id;

    const header = document.createElement("div");
    header.className = "hit-header";
    const score = document.createElement("span");
    score.className = "hit-score";
    score.textContent = `Score: ${hit.score.toFixed(3)}`;
    const title = document.createElement("a");
    title.className = "hit-title";
    title.textContent = hit.title || hit.doc_id;
    title.href = "#";
    title.addEventListener("click", (event) => {
      event.preventDefault();
      onOpen(hit.doc_id);
    });
    header.append(score, title);

    const meta = document.createElement("div");
    meta.className = "hit-meta";
    meta.textContent = [hit.journal, hit.year].filter((v) => v != null).join(", ");

    const phrases = document.createElement("div");
    phrases.className = "hit-keyphrases";
    for (const phrase of hit.keyphrases.slice(0, 6)) {
      const chip = document.createElement("span");
      chip.className = "kp-chip";
      chip.textContent = phrase.text;
      chip.title = phrase.score.toFixed(3);
      phrases.append(chip);
    }

    item.append(header, meta, phrases);
    list.append(item);
  }
  container.append(list);
}
