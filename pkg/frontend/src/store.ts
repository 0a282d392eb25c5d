// Client-side session state.
//
// The store is a pure protocol client: it never computes chemistry, it only
// folds the server's event stream into view state.  Control values shown to
// the user always come from `confirmed`, which changes on exactly two
// occasions: a command of ours is acknowledged, or a state snapshot reports
// the server's configuration.  Optimistic values live in `pending` until the
// ack or error arrives, so a rejected command snaps back by simply being
// dropped.

import {
  AckEvent,
  AlgorithmId,
  ChemistryId,
  Command,
  DeathEvent,
  ErrorEvent,
  LoadedEvent,
  ReportEvent,
  RewriteClass,
  SessionEvent,
  StateEvent,
  StrategyId,
} from "./protocol.js";

export interface ConfirmedConfig {
  chemistry: ChemistryId;
  algorithm: AlgorithmId;
  strategy: StrategyId;
  weights: number;
}

export interface StatsPoint {
  step: number;
  nodes: number;
  matches: number;
  grow: number;
  slim: number;
  neutral: number;
}

export interface ClassTotals {
  GROW: number;
  SLIM: number;
  NEUTRAL: number;
}

export interface LoadedInfo {
  nodeCount: number;
  edgeCount: number;
  chemistry: ChemistryId;
}

// Defaults match a fresh server session before any command.
export function defaultConfig(): ConfirmedConfig {
  return { chemistry: "chemlambda", algorithm: "random", strategy: "GROW", weights: 0.5 };
}

export class SessionStore {
  confirmed: ConfirmedConfig = defaultConfig();
  pending = new Map<string, Command>();
  loaded: LoadedInfo | null = null;
  graph: StateEvent | null = null;
  reports: ReportEvent[] = [];
  series: StatsPoint[] = [];
  classTotals: ClassTotals = { GROW: 0, SLIM: 0, NEUTRAL: 0 };
  running = false;
  dead = false;
  deathStep: number | null = null;
  lastError: string | null = null;
  lastStep = 0;

  /** Record a command the moment it is written to the socket. */
  commandSent(command: Command): void {
    if (command.id !== undefined) {
      this.pending.set(command.id, command);
    }
  }

  /** Fold one server event into the view state. */
  apply(event: SessionEvent): void {
    switch (event.type) {
      case "ack":
        this.applyAck(event);
        break;
      case "error":
        this.applyError(event);
        break;
      case "loaded":
        this.applyLoaded(event);
        break;
      case "report":
        this.applyReport(event);
        break;
      case "state":
        this.applyState(event);
        break;
      case "death":
        this.applyDeath(event);
        break;
    }
  }

  private takePending(id: string | null | undefined): Command | null {
    if (id === null || id === undefined) {
      return null;
    }
    const command = this.pending.get(id) ?? null;
    this.pending.delete(id);
    return command;
  }

  private applyAck(event: AckEvent): void {
    const command = this.takePending(event.id);
    if (command === null) {
      return;
    }
    switch (command.type) {
      case "set_weights":
        this.confirmed.weights = command.w;
        break;
      case "set_algorithm":
        this.confirmed.algorithm = command.algorithm;
        if (command.strategy !== undefined) {
          this.confirmed.strategy = command.strategy;
        }
        break;
      case "set_chemistry":
        this.confirmed.chemistry = command.chemistry;
        // the new rule table may revive a graph the old one had declared dead
        this.dead = false;
        break;
      case "run":
        this.running = true;
        break;
      case "pause":
        this.running = false;
        break;
      default:
        // load/reset wait for their loaded event; step/snapshot carry no config
        break;
    }
  }

  private applyError(event: ErrorEvent): void {
    this.takePending(event.id);
    this.lastError = event.message;
  }

  private applyLoaded(event: LoadedEvent): void {
    this.loaded = {
      nodeCount: event.node_count,
      edgeCount: event.edge_count,
      chemistry: event.chemistry,
    };
    this.confirmed.chemistry = event.chemistry;
    this.graph = null;
    this.running = false;
    this.dead = false;
    this.deathStep = null;
  }

  private applyReport(event: ReportEvent): void {
    if (event.step <= this.lastStep) {
      throw new Error(
        `report step ${event.step} not after ${this.lastStep}: reports must be strictly increasing`,
      );
    }
    this.lastStep = event.step;
    this.reports.push(event);
    const fired: Record<RewriteClass, number> = { GROW: 0, SLIM: 0, NEUTRAL: 0 };
    for (const rewrite of event.applied) {
      fired[rewrite.class] += 1;
      this.classTotals[rewrite.class] += 1;
    }
    this.series.push({
      step: event.step,
      nodes: event.node_count,
      matches: event.matches_found,
      grow: fired.GROW,
      slim: fired.SLIM,
      neutral: fired.NEUTRAL,
    });
  }

  private applyState(event: StateEvent): void {
    this.graph = event;
    // snapshots restate the server's configuration; adopt it as confirmed
    this.confirmed.chemistry = event.chemistry;
    this.confirmed.algorithm = event.algorithm;
    this.confirmed.weights = event.weights;
    this.confirmed.strategy = event.strategy;
    this.dead = event.dead;
  }

  private applyDeath(event: DeathEvent): void {
    this.dead = true;
    this.deathStep = event.step;
    this.running = false;
  }

  clearError(): void {
    this.lastError = null;
  }
}
