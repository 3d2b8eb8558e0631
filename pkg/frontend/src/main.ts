import { GatewayClient } from "./api.js";
import { CollabClient } from "./collab.js";
import { FilterPanel } from "./filters.js";
import { ResultGrid } from "./grid.js";
import { HistoryMenu } from "./historyMenu.js";
import { handleActivation } from "./interactions.js";
import { LabelStore } from "./labels.js";
import type { QueryPayload, ResultPage } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get("api") ?? "http://127.0.0.1:8765";
  const team = params.get("team") ?? "team1";
  const peer = params.get("peer") ?? `peer-${Math.random().toString(36).slice(2, 8)}`;

  const api = new GatewayClient(apiBase);
  const store = new LabelStore();
  const statusLine = el<HTMLElement>("status");

  const filterPanel = new FilterPanel({
    thresholdSlider: el<HTMLInputElement>("threshold"),
    thresholdValue: el<HTMLElement>("threshold-value"),
    colorPicker: el<HTMLSelectElement>("color-filter"),
  });

  const grid = new ResultGrid({
    container: el<HTMLElement>("grid"),
    thumbUrl: (video, shot) => api.thumbUrl(video, shot),
    onActivate: (item, shiftKey) => {
      void handleActivation(item, shiftKey, {
        api,
        grid,
        team,
        taskId: () => el<HTMLInputElement>("task-id").value.trim(),
        onVerdict: (it, verdict) => {
          statusLine.textContent = `${it.video_id}/${it.shot_id}: ${verdict.status} (score ${verdict.score_so_far.toFixed(1)})`;
        },
      });
    },
  });

  store.onChange((video, shot, color) => grid.setHighlight(video, shot, color));

  const collab = new CollabClient(api.collabUrl(), team, peer, store, {
    onError: (code) => {
      statusLine.textContent = `collab error: ${code}`;
    },
  });
  collab.connect();

  const historyMenu = new HistoryMenu({
    container: el<HTMLElement>("history-list"),
    api,
    onReload: (page, entryId) => {
      showPage(page, (offset, pageSize) => api.reload(entryId, offset, pageSize));
      statusLine.textContent = `reloaded history entry #${entryId}`;
    },
  });

  function paintExistingLabels(): void {
    for (const [video, shot, record] of store.entries()) {
      grid.setHighlight(video, shot, record.color);
    }
  }

  function showPage(page: ResultPage, fetchMore: (offset: number, pageSize: number) => Promise<ResultPage>): void {
    grid.showResults(page, fetchMore);
    paintExistingLabels();
  }

  const form = el<HTMLFormElement>("query-form");
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const text = el<HTMLInputElement>("query-text").value;
    const payload: QueryPayload = filterPanel.apply({ text });
    statusLine.textContent = "searching…";
    api
      .query(payload)
      .then((page) => {
        showPage(page, (offset, pageSize) => api.reload(page.entry_id, offset, pageSize));
        statusLine.textContent = `${page.total} results`;
        return historyMenu.refresh();
      })
      .catch((err) => {
        statusLine.textContent = `query failed: ${err instanceof Error ? err.message : err}`;
      });
  });

  void historyMenu.refresh().catch(() => undefined);
  statusLine.textContent = `ready: team ${team}, peer ${peer}`;
}

boot();
