// Socket client for the session protocol.
//
// Wraps one persistent connection: outgoing commands get a fresh id and are
// mirrored into the store as pending; incoming messages are split into
// newline-JSON events and folded into the store.  The socket constructor is
// injectable so tests can drive the client with a scripted fake.

import {
  Command,
  CommandDraft,
  decodeEvent,
  encodeCommand,
  nextCommandId,
  SessionEvent,
} from "./protocol.js";
import { SessionStore } from "./store.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onerror: ((err: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionState = "connecting" | "connected" | "disconnected";

function browserSocket(url: string): SocketLike {
  return new WebSocket(url) as unknown as SocketLike;
}

export class PlaygroundClient {
  state: ConnectionState = "disconnected";
  onEvent: ((event: SessionEvent) => void) | null = null;
  onStateChange: ((state: ConnectionState) => void) | null = null;
  private socket: SocketLike | null = null;
  private reconnectDelay = 500;
  private readonly maxReconnectDelay = 15000;
  private closedByUs = false;

  constructor(
    private url: string,
    private store: SessionStore,
    private factory: SocketFactory = browserSocket,
  ) {}

  connect(): void {
    this.closedByUs = false;
    this.setState("connecting");
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.reconnectDelay = 500;
      this.setState("connected");
    };
    socket.onmessage = (ev) => this.receive(ev.data);
    socket.onerror = () => {
      // onclose follows; nothing to do here
    };
    socket.onclose = () => {
      this.socket = null;
      this.setState("disconnected");
      if (!this.closedByUs) {
        setTimeout(() => this.connect(), this.reconnectDelay);
        this.reconnectDelay = Math.min(this.reconnectDelay * 2, this.maxReconnectDelay);
      }
    };
  }

  disconnect(): void {
    this.closedByUs = true;
    this.socket?.close();
    this.socket = null;
    this.setState("disconnected");
  }

  /** Assign an id, record the command as pending, and put it on the wire. */
  send(command: CommandDraft): string {
    if (this.socket === null || this.state !== "connected") {
      throw new Error("not connected");
    }
    const id = command.id ?? nextCommandId();
    const full = { v: 1, ...command, id } as Command;
    this.store.commandSent(full);
    this.socket.send(encodeCommand(full));
    return id;
  }

  /** Fold raw socket data (one or more newline-JSON lines) into the store. */
  receive(data: string): SessionEvent[] {
    const events: SessionEvent[] = [];
    for (const line of data.split("\n")) {
      if (line.trim() === "") {
        continue;
      }
      const event = decodeEvent(line);
      this.store.apply(event);
      events.push(event);
      this.onEvent?.(event);
    }
    return events;
  }

  private setState(state: ConnectionState): void {
    if (state !== this.state) {
      this.state = state;
      this.onStateChange?.(state);
    }
  }
}
