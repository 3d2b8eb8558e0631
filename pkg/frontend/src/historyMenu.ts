import type { GatewayClient } from "./api.js";
import type { ResultPage } from "./types.js";

export interface HistoryMenuOptions {
  container: HTMLElement;
  api: GatewayClient;
  /** Receives the reloaded first page plus a fetcher for further pages. */
  onReload: (page: ResultPage, entryId: number) => void;
  pageSize?: number;
}

/**
 * The query-history menu: lists every recorded query, newest first, and
 * reloads a stored result set without touching the retrieval engine
 * (reloads go through /history/{id}, never /query).
 */
export class HistoryMenu {
  constructor(private readonly options: HistoryMenuOptions) {}

  async refresh(): Promise<void> {
    const { container, api } = this.options;
    const entries = await api.history();
    container.textContent = "";
    if (entries.length === 0) {
      const empty = document.createElement("li");
      empty.textContent = "no queries yet";
      container.appendChild(empty);
      return;
    }
    for (const entry of entries) {
      const li = document.createElement("li");
      const button = document.createElement("button");
      button.dataset.entryId = String(entry.entry_id);
      const filters: string[] = [];
      if (entry.spec.score_threshold !== undefined) filters.push(`score≥${entry.spec.score_threshold}`);
      if (entry.spec.color_filter) filters.push(entry.spec.color_filter.toLowerCase());
      button.textContent =
        `#${entry.entry_id} “${entry.spec.text}”` + (filters.length ? ` (${filters.join(", ")})` : "");
      button.addEventListener("click", () => void this.reload(entry.entry_id));
      li.appendChild(button);
      container.appendChild(li);
    }
  }

  async reload(entryId: number): Promise<void> {
    const page = await this.options.api.reload(entryId, 0, this.options.pageSize ?? 100);
    this.options.onReload(page, entryId);
  }
}
