import type { LabelStore } from "./labels.js";
import type { ServerFrame, WireItem } from "./types.js";

/** The subset of WebSocket this client touches, swappable in tests. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface CollabOptions {
  socketFactory?: SocketFactory;
  reconnectDelayMs?: number;
  onError?: (code: string) => void;
}

/**
 * Keeps a LabelStore in sync with the collab socket. Joins on connect;
 * snapshot and events feed the store in arrival order (the server already
 * orders events by seq). A dropped socket triggers a rejoin, and the
 * fresh snapshot overwrites local state.
 */
export class CollabClient {
  private socket: SocketLike | null = null;
  private closed = false;
  private readonly factory: SocketFactory;
  private readonly reconnectDelayMs: number;
  private readonly onError: (code: string) => void;

  constructor(
    private readonly url: string,
    private readonly session: string,
    private readonly peer: string,
    readonly store: LabelStore,
    options: CollabOptions = {},
  ) {
    this.factory = options.socketFactory ?? ((u) => new WebSocket(u) as unknown as SocketLike);
    this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
    this.onError = options.onError ?? (() => undefined);
  }

  connect(): void {
    this.closed = false;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      socket.send(JSON.stringify({ type: "join", session: this.session, peer: this.peer }));
    };
    socket.onmessage = (event) => this.handleFrame(event.data);
    socket.onerror = () => undefined; // onclose follows and handles it
    socket.onclose = () => {
      this.socket = null;
      if (!this.closed) {
        setTimeout(() => {
          if (!this.closed) this.connect();
        }, this.reconnectDelayMs);
      }
    };
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
    this.socket = null;
  }

  /** Ask the server to label an item; state changes arrive via broadcast. */
  label(item: WireItem, color: string): void {
    this.socket?.send(JSON.stringify({ type: "label", item, color }));
  }

  private handleFrame(data: string): void {
    let frame: ServerFrame;
    try {
      frame = JSON.parse(data) as ServerFrame;
    } catch {
      return;
    }
    if (frame.type === "snapshot") {
      this.store.applySnapshot(frame);
    } else if (frame.type === "event") {
      this.store.applyEvent(frame);
    } else if (frame.type === "error") {
      this.onError(frame.code);
    }
  }
}
