import type { LabelColor, ResultItem, ResultPage } from "./types.js";
import { itemKey } from "./types.js";

/** The sliver of IntersectionObserver the grid uses, swappable in tests. */
export interface ObserverLike {
  observe(el: Element): void;
  unobserve(el: Element): void;
  disconnect(): void;
}

/**
 * ``prefetchSpanPx`` is the total extra span kept warm around the
 * viewport (one viewport height), split evenly above and below.
 */
export type ObserverFactory = (
  onIntersect: (el: Element) => void,
  prefetchSpanPx: number,
) => ObserverLike;

export type PageFetcher = (offset: number, pageSize: number) => Promise<ResultPage>;

export interface GridOptions {
  container: HTMLElement;
  thumbUrl: (video: string, shot: string) => string;
  onActivate: (item: ResultItem, shiftKey: boolean) => void;
  pageSize?: number;
  /** Viewport height driving the prefetch span; defaults to the window's. */
  viewportPx?: number;
  observerFactory?: ObserverFactory;
  /** Thumbnail request hook; default assigns img.src. Counted either way. */
  requestThumb?: (img: HTMLImageElement, url: string) => void;
}

function defaultObserverFactory(
  onIntersect: (el: Element) => void,
  prefetchSpanPx: number,
): ObserverLike {
  return new IntersectionObserver(
    (entries) => {
      for (const entry of entries) {
        if (entry.isIntersecting) onIntersect(entry.target);
      }
    },
    { rootMargin: `${Math.floor(prefetchSpanPx / 2)}px 0px` },
  );
}

/**
 * Result grid with on-demand thumbnails and on-scroll paging.
 *
 * Cells render immediately in score order, but a cell's thumbnail is
 * requested only once the cell nears the viewport (a prefetch span of one
 * viewport height, half above and half below), and exactly once per shot
 * no matter how often it scrolls by. A sentinel after the last cell pulls
 * the next page while more results exist.
 */
export class ResultGrid {
  thumbRequests = 0;
  pageFetches = 0;
  readonly requested = new Set<string>();

  private readonly container: HTMLElement;
  private readonly pageSize: number;
  private readonly observer: ObserverLike;
  private readonly cells = new Map<string, HTMLElement>();
  private readonly cellItems = new WeakMap<Element, ResultItem>();
  private sentinel: HTMLElement | null = null;
  private fetchPage: PageFetcher | null = null;
  private fetching = false;
  private loadedCount = 0;
  private total = 0;

  constructor(private readonly options: GridOptions) {
    this.container = options.container;
    this.pageSize = options.pageSize ?? 100;
    const viewport = options.viewportPx ?? (typeof window !== "undefined" ? window.innerHeight : 800);
    const factory = options.observerFactory ?? defaultObserverFactory;
    this.observer = factory((el) => this.onVisible(el), viewport);
  }

  /** Replace the grid contents with a fresh result page. */
  showResults(page: ResultPage, fetchMore: PageFetcher | null): void {
    this.observer.disconnect();
    this.container.textContent = "";
    this.cells.clear();
    this.requested.clear();
    this.thumbRequests = 0;
    this.pageFetches = 0;
    this.loadedCount = 0;
    this.total = page.total;
    this.fetchPage = fetchMore;
    this.sentinel = null;

    if (page.total === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "no results";
      this.container.appendChild(empty);
      return;
    }
    this.appendPage(page.results);
  }

  itemCount(): number {
    return this.loadedCount;
  }

  isFetching(): boolean {
    return this.fetching;
  }

  cellOf(video: string, shot: string): HTMLElement | undefined {
    return this.cells.get(itemKey(video, shot));
  }

  setHighlight(video: string, shot: string, color: LabelColor | null): void {
    const cell = this.cells.get(itemKey(video, shot));
    if (!cell) return;
    cell.dataset.label = color ?? "";
    cell.classList.toggle("submitted", color === "submitted_red");
  }

  /** Surface a submission failure inline on the item, never a blank crash. */
  markError(video: string, shot: string, message: string): void {
    const cell = this.cells.get(itemKey(video, shot));
    if (!cell) return;
    let note = cell.querySelector<HTMLElement>(".cell-error");
    if (!note) {
      note = document.createElement("span");
      note.className = "cell-error";
      cell.appendChild(note);
    }
    note.textContent = message;
  }

  setVerdict(video: string, shot: string, text: string): void {
    const cell = this.cells.get(itemKey(video, shot));
    if (!cell) return;
    let badge = cell.querySelector<HTMLElement>(".verdict");
    if (!badge) {
      badge = document.createElement("span");
      badge.className = "verdict";
      cell.appendChild(badge);
    }
    badge.textContent = text;
  }

  private appendPage(items: ResultItem[]): void {
    if (this.sentinel) {
      this.observer.unobserve(this.sentinel);
      this.sentinel.remove();
      this.sentinel = null;
    }
    for (const item of items) {
      this.container.appendChild(this.makeCell(item));
    }
    this.loadedCount += items.length;
    if (this.fetchPage && this.loadedCount < this.total) {
      const sentinel = document.createElement("div");
      sentinel.className = "grid-sentinel";
      this.container.appendChild(sentinel);
      this.sentinel = sentinel;
      this.observer.observe(sentinel);
    }
  }

  private makeCell(item: ResultItem): HTMLElement {
    const cell = document.createElement("figure");
    cell.className = "cell";
    cell.dataset.video = item.video_id;
    cell.dataset.shot = item.shot_id;
    this.cellItems.set(cell, item);
    this.cells.set(itemKey(item.video_id, item.shot_id), cell);

    const img = document.createElement("img");
    img.alt = `${item.video_id}/${item.shot_id}`;
    img.loading = "lazy";
    cell.appendChild(img);

    const caption = document.createElement("figcaption");
    caption.textContent = `${item.video_id}/${item.shot_id} · ${item.score.toFixed(3)}`;
    cell.appendChild(caption);

    cell.addEventListener("click", (ev) => {
      this.options.onActivate(item, ev.shiftKey);
    });
    this.observer.observe(cell);
    return cell;
  }

  private onVisible(el: Element): void {
    if (el === this.sentinel) {
      void this.fetchNextPage();
      return;
    }
    const item = this.cellItems.get(el);
    if (!item) return;
    const key = itemKey(item.video_id, item.shot_id);
    if (this.requested.has(key)) return;
    this.requested.add(key);
    this.observer.unobserve(el);
    const img = el.querySelector("img");
    if (img) this.loadThumb(img as HTMLImageElement, item);
  }

  private loadThumb(img: HTMLImageElement, item: ResultItem): void {
    this.thumbRequests += 1;
    const url = this.options.thumbUrl(item.video_id, item.shot_id);
    if (this.options.requestThumb) {
      this.options.requestThumb(img, url);
    } else {
      img.src = url;
    }
  }

  private async fetchNextPage(): Promise<void> {
    if (this.fetching || !this.fetchPage || this.loadedCount >= this.total) return;
    this.fetching = true;
    const offset = this.loadedCount;
    try {
      this.pageFetches += 1;
      const page = await this.fetchPage(offset, this.pageSize);
      this.appendPage(page.results);
    } catch (err) {
      this.showRetry(err instanceof Error ? err.message : "page fetch failed");
    } finally {
      this.fetching = false;
    }
  }

  private showRetry(message: string): void {
    if (!this.sentinel) return;
    this.observer.unobserve(this.sentinel);
    this.sentinel.textContent = "";
    const note = document.createElement("span");
    note.className = "fetch-error";
    note.textContent = message;
    const retry = document.createElement("button");
    retry.className = "retry";
    retry.textContent = "retry";
    retry.addEventListener("click", () => {
      if (!this.sentinel) return;
      this.sentinel.textContent = "";
      this.observer.observe(this.sentinel);
      void this.fetchNextPage();
    });
    this.sentinel.append(note, retry);
  }
}
