/** Search controls: term chips, AND/OR toggle, input with autosuggest. */

import type { Operator } from "./types.js";

const MAX_TERMS = 10;

export class QueryPanel {
  readonly root: HTMLElement;
  readonly input: HTMLInputElement;
  readonly chips: HTMLDivElement;
  readonly suggestList: HTMLUListElement;
  readonly opToggle: HTMLButtonElement;

  terms: string[] = [];
  operator: Operator = "and";

  onCommit: () => void = () => {};
  onCleared: () => void = () => {};
  onPrefixTyped: (prefix: string) => void = () => {};

  constructor(container: HTMLElement) {
    this.root = document.createElement("div");
    this.root.className = "query-panel";

    this.chips = document.createElement("div");
    this.chips.className = "term-chips";

    const row = document.createElement("div");
    row.className = "query-row";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.placeholder = "type a keyphrase…";
    this.input.className = "query-input";
    this.opToggle = document.createElement("button");
    this.opToggle.className = "op-toggle";
    this.opToggle.textContent = "AND";
    row.append(this.input, this.opToggle);

    this.suggestList = document.createElement("ul");
    this.suggestList.className = "suggest-list";
    this.suggestList.hidden = true;

    this.root.append(this.chips, row, this.suggestList);
    container.append(this.root);
    this.wireEvents();
  }

  private wireEvents(): void {
    this.input.addEventListener("input", () => {
      const prefix = this.input.value.trim().toLowerCase();
      if (prefix) {
        this.onPrefixTyped(prefix);
      } else {
        this.setSuggestions([]);
      }
    });
    this.input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") {
        const term = this.input.value.trim().toLowerCase();
        if (term) this.acceptTerm(term);
      }
    });
    this.opToggle.addEventListener("click", () => {
      this.operator = this.operator === "and" ? "or" : "and";
      this.opToggle.textContent = this.operator.toUpperCase();
      if (this.terms.length > 0) this.onCommit();
    });
  }

  setSuggestions(items: string[]): void {
    this.suggestList.textContent = "";
    this.suggestList.hidden = items.length === 0;
    for (const item of items) {
      const li = document.createElement("li");
      li.textContent = item;
      li.className = "suggest-item";
      li.addEventListener("click", () => this.acceptTerm(item));
      this.suggestList.append(li);
    }
  }

  acceptTerm(term: string): void {
    this.input.value = "";
    this.setSuggestions([]);
    if (this.terms.includes(term) || this.terms.length >= MAX_TERMS) return;
    this.terms.push(term);
    this.renderChips();
    this.onCommit();
  }

  removeTerm(term: string): void {
    this.terms = this.terms.filter((t) => t !== term);
    this.renderChips();
    if (this.terms.length === 0) {
      this.onCleared();
    } else {
      this.onCommit();
    }
  }

  private renderChips(): void {
    this.chips.textContent = "";
    for (const term of this.terms) {
      const chip = document.createElement("span");
      chip.className = "term-chip";
      const label = document.createElement("span");
      label.textContent = term;
      const remove = document.createElement("button");
      remove.textContent = "×";
      remove.className = "chip-remove";
      remove.setAttribute("aria-label", `remove ${term}`);
      remove.addEventListener("click", () => this.removeTerm(term));
      chip.append(label, remove);
      this.chips.append(chip);
    }
  }
}
