import type { GatewayClient } from "./api.js";
import type { ResultGrid } from "./grid.js";
import type { ResultItem, SubmitResponse } from "./types.js";
import { openPlayer } from "./player.js";

/** Shift-click submits; a plain click opens playback. Nothing else does. */
export function classifyActivation(shiftKey: boolean): "submit" | "open" {
  return shiftKey ? "submit" : "open";
}

export interface InteractionDeps {
  api: GatewayClient;
  grid: ResultGrid;
  team: string;
  taskId: () => string;
  onVerdict?: (item: ResultItem, verdict: SubmitResponse) => void;
}

/**
 * Handle a grid item activation. The submitted frame is the shot's start
 * time; the red highlight is not set locally but arrives through the
 * collab broadcast once the judge accepts, so every teammate sees it at
 * the same moment.
 */
export async function handleActivation(
  item: ResultItem,
  shiftKey: boolean,
  deps: InteractionDeps,
): Promise<void> {
  if (classifyActivation(shiftKey) === "open") {
    openPlayer(item, deps.api.thumbUrl(item.video_id, item.shot_id));
    return;
  }
  const task = deps.taskId();
  if (!task) {
    deps.grid.markError(item.video_id, item.shot_id, "no task selected");
    return;
  }
  try {
    const verdict = await deps.api.submit(deps.team, item.video_id, item.start_ms ?? 0, task);
    deps.grid.setVerdict(item.video_id, item.shot_id, verdict.status);
    deps.onVerdict?.(item, verdict);
  } catch (err) {
    const message = err instanceof Error ? err.message : "submit failed";
    deps.grid.markError(item.video_id, item.shot_id, message);
  }
}
