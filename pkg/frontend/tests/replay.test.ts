// Protocol-replay fixtures drive the store exactly as a live socket would.
//
// The fixtures are transcripts recorded against the real server session
// (scripts/make_ui_fixtures.py in the repository root): one JSON object per
// line, tagged send or recv.  Replaying them here proves the UI side of the
// protocol without a running server, and pins the central invariant: the
// displayed configuration mirrors the server's acknowledgements at every
// single event, never the value the user last touched.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { Command, decodeEvent, SessionEvent } from "../src/protocol";
import { ConfirmedConfig, defaultConfig, SessionStore } from "../src/store";
import { latestWindow, windowTotals } from "../src/chart";

interface TranscriptLine {
  dir: "send" | "recv";
  msg: Record<string, unknown>;
}

function loadFixture(name: string): TranscriptLine[] {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return readFileSync(url, "utf8")
    .split("\n")
    .filter((line) => line.trim() !== "")
    .map((line) => JSON.parse(line) as TranscriptLine);
}

/**
 * Reference mirror maintained independently of the store: watches the same
 * transcript and applies only acknowledged commands, the way the protocol
 * says a client must.
 */
class AckMirror {
  config: ConfirmedConfig = defaultConfig();
  private sent = new Map<string, Command>();

  send(command: Command): void {
    if (command.id !== undefined) {
      this.sent.set(command.id, command);
    }
  }

  recv(event: SessionEvent): void {
    if (event.type === "ack" && event.id != null) {
      const command = this.sent.get(event.id);
      this.sent.delete(event.id);
      if (command === undefined) {
        return;
      }
      if (command.type === "set_weights") {
        this.config.weights = command.w;
      } else if (command.type === "set_algorithm") {
        this.config.algorithm = command.algorithm;
        if (command.strategy !== undefined) {
          this.config.strategy = command.strategy;
        }
      } else if (command.type === "set_chemistry") {
        this.config.chemistry = command.chemistry;
      }
    } else if (event.type === "error" && event.id != null) {
      this.sent.delete(event.id);
    } else if (event.type === "loaded") {
      this.config.chemistry = event.chemistry;
    } else if (event.type === "state") {
      this.config = {
        chemistry: event.chemistry,
        algorithm: event.algorithm,
        weights: event.weights,
        strategy: event.strategy,
      };
    }
  }
}

function replay(name: string): { store: SessionStore; events: SessionEvent[] } {
  const store = new SessionStore();
  const mirror = new AckMirror();
  const events: SessionEvent[] = [];
  for (const line of loadFixture(name)) {
    if (line.dir === "send") {
      const command = line.msg as unknown as Command;
      store.commandSent(command);
      mirror.send(command);
      continue;
    }
    // run recv lines through the wire decoder, exactly like socket data
    const event = decodeEvent(JSON.stringify(line.msg));
    store.apply(event);
    mirror.recv(event);
    events.push(event);
    expect(store.confirmed, `config diverged after ${event.type}`).toEqual(mirror.config);
  }
  return { store, events };
}

describe("lifecycle replay: load, steer, mid-run set_weights, death", () => {
  it("mirrors acked configuration at every event", () => {
    // the per-event assertion lives inside replay(); reaching the end of the
    // transcript without a mismatch is the test
    const { events } = replay("lifecycle.jsonl");
    expect(events.length).toBeGreaterThan(20);
  });

  it("keeps the pre-steering weight until the ack arrives", () => {
    const store = new SessionStore();
    let sawMidRunChange = false;
    for (const line of loadFixture("lifecycle.jsonl")) {
      if (line.dir === "send") {
        const command = line.msg as unknown as Command;
        store.commandSent(command);
        if (command.type === "set_weights" && command.w === 0) {
          // command is on the wire but unacknowledged: still the old value
          expect(store.confirmed.weights).toBe(0.9);
          sawMidRunChange = true;
        }
      } else {
        store.apply(decodeEvent(JSON.stringify(line.msg)));
      }
    }
    expect(sawMidRunChange).toBe(true);
    expect(store.confirmed.weights).toBe(0);
  });

  it("reaches death and reports it exactly once", () => {
    const { store, events } = replay("lifecycle.jsonl");
    const deaths = events.filter((e) => e.type === "death");
    expect(deaths).toHaveLength(1);
    expect(store.dead).toBe(true);
    expect(store.deathStep).toBe(12);
    expect(store.running).toBe(false);
    const lastReport = store.reports[store.reports.length - 1];
    expect(lastReport.dead).toBe(true);
    expect(lastReport.step).toBe(store.deathStep);
  });

  it("keeps every report and strictly increasing steps", () => {
    const { store, events } = replay("lifecycle.jsonl");
    const reportEvents = events.filter((e) => e.type === "report");
    expect(store.reports).toHaveLength(reportEvents.length);
    expect(store.reports.map((r) => r.step)).toEqual([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
  });

  it("snaps back on rejected commands and surfaces the message", () => {
    const { store } = replay("lifecycle.jsonl");
    // c7 tried w=1.5 and was rejected; confirmed stays at the acked 0.0
    expect(store.confirmed.weights).toBe(0);
    expect(store.lastError).toContain("reset before stepping");
    expect(store.pending.size).toBe(0);
  });

  it("ends with a snapshot that matches the death", () => {
    const { store } = replay("lifecycle.jsonl");
    expect(store.graph).not.toBeNull();
    expect(store.graph!.dead).toBe(true);
    expect(store.graph!.step).toBe(12);
    expect(store.graph!.weights).toBe(0);
  });
});

describe("grow-extreme replay: slider at the GROW end", () => {
  it("shows zero SLIM rewrites in the stats totals", () => {
    const { store } = replay("grow-extreme.jsonl");
    expect(store.classTotals.SLIM).toBe(0);
    expect(store.classTotals.GROW).toBeGreaterThan(0);
    const windowed = windowTotals(latestWindow(store.series, 200));
    expect(windowed.SLIM).toBe(0);
    expect(windowed.GROW).toBe(store.classTotals.GROW);
  });

  it("confirms the extreme weight before the steps begin", () => {
    const { store } = replay("grow-extreme.jsonl");
    expect(store.confirmed.weights).toBe(1);
    expect(store.reports.length).toBe(8);
  });
});
