import type { ResultItem } from "./types.js";

function formatMs(ms: number): string {
  const totalSeconds = Math.floor(ms / 1000);
  const minutes = Math.floor(totalSeconds / 60);
  const seconds = totalSeconds % 60;
  return `${minutes}:${String(seconds).padStart(2, "0")}`;
}

/**
 * Plain-click playback surface. The collection stores keyframes rather
 * than media files, so "playback" is a full-size keyframe view opened at
 * the shot's start time, with the time stamp shown.
 */
export function openPlayer(item: ResultItem, thumbUrl: string, root: Document = document): HTMLElement {
  root.querySelector(".player-overlay")?.remove();
  const overlay = root.createElement("div");
  overlay.className = "player-overlay";

  const img = root.createElement("img");
  img.src = thumbUrl;
  img.alt = `${item.video_id} at ${item.start_ms ?? 0}ms`;
  overlay.appendChild(img);

  const caption = root.createElement("p");
  const startMs = item.start_ms ?? 0;
  caption.textContent = `${item.video_id} / ${item.shot_id} · from ${formatMs(startMs)}`;
  overlay.dataset.video = item.video_id;
  overlay.dataset.startMs = String(startMs);
  overlay.appendChild(caption);

  overlay.addEventListener("click", () => overlay.remove());
  root.body.appendChild(overlay);
  return overlay;
}
