/**
 * Engine connection: a thin WebSocket wrapper speaking the wire protocol.
 *
 * The socket implementation is injectable so tests can drive the dashboard
 * from a mock engine without any network.
 */

import {
  decodeEngineMessage,
  encodeEnd,
  encodeFrame,
  ErrorMessage,
  FrameRecord,
  ReportMessage,
  SummaryMessage,
} from "./protocol.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((event: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

const browserSocketFactory: SocketFactory = (url) =>
  new WebSocket(url) as unknown as SocketLike;

export interface EngineEvents {
  onStatus?: (status: ConnectionStatus) => void;
  onReport?: (report: ReportMessage) => void;
  onError?: (error: ErrorMessage) => void;
  onSummary?: (summary: SummaryMessage) => void;
  onProtocolProblem?: (detail: string) => void;
}

export class EngineSocket {
  private socket: SocketLike | null = null;
  status: ConnectionStatus = "disconnected";

  constructor(
    private readonly events: EngineEvents,
    private readonly factory: SocketFactory = browserSocketFactory,
  ) {}

  connect(url: string): void {
    this.close();
    this.setStatus("connecting");
    const socket = this.factory(url);
    this.socket = socket;
    socket.onopen = () => this.setStatus("connected");
    socket.onclose = () => this.setStatus("disconnected");
    socket.onerror = () => this.setStatus("disconnected");
    socket.onmessage = (event) => this.handleMessage(event.data);
  }

  private handleMessage(raw: string): void {
    let message;
    try {
      message = decodeEngineMessage(raw);
    } catch (e) {
      this.events.onProtocolProblem?.(String(e));
      return;
    }
    if (message.type === "report") this.events.onReport?.(message);
    else if (message.type === "error") this.events.onError?.(message);
    else this.events.onSummary?.(message);
  }

  private setStatus(status: ConnectionStatus): void {
    this.status = status;
    this.events.onStatus?.(status);
  }

  get connected(): boolean {
    return this.status === "connected";
  }

  sendFrame(record: FrameRecord): void {
    this.socket?.send(encodeFrame(record));
  }

  end(): void {
    this.socket?.send(encodeEnd());
  }

  close(): void {
    if (this.socket) {
      const socket = this.socket;
      this.socket = null;
      socket.onclose = null;
      socket.close();
      this.setStatus("disconnected");
    }
  }
}
