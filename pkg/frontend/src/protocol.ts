// Wire types for the newline-JSON session protocol (schema version 1).
//
// Commands travel client -> server, one JSON object per line; events travel
// back the same way.  Every accepted command is acknowledged before its
// effects appear; failures produce an `error` event instead of an ack.  The
// field names here are bit-exact: `JSON.stringify` of a Command is a valid
// protocol line.

export const PROTOCOL_VERSION = 1;

export type AlgorithmId = "random" | "older_first";
export type StrategyId = "GROW" | "SLIM";
export type ChemistryId = "chemlambda" | "diric" | "ic";
export type RewriteClass = "GROW" | "SLIM" | "NEUTRAL";

interface CommandBase {
  v: typeof PROTOCOL_VERSION;
  id?: string;
}

export interface LoadCommand extends CommandBase {
  type: "load";
  mol_text?: string;
  catalog_name?: string;
  chemistry?: ChemistryId;
}

export interface SetAlgorithmCommand extends CommandBase {
  type: "set_algorithm";
  algorithm: AlgorithmId;
  strategy?: StrategyId;
}

export interface SetWeightsCommand extends CommandBase {
  type: "set_weights";
  w: number;
}

export interface SetChemistryCommand extends CommandBase {
  type: "set_chemistry";
  chemistry: ChemistryId;
}

export interface StepCommand extends CommandBase {
  type: "step";
  n?: number;
}

export interface RunCommand extends CommandBase {
  type: "run";
  steps_per_second?: number;
}

export interface PauseCommand extends CommandBase {
  type: "pause";
}

export interface SnapshotCommand extends CommandBase {
  type: "snapshot";
}

export interface ResetCommand extends CommandBase {
  type: "reset";
  seed?: number;
}

export type Command =
  | LoadCommand
  | SetAlgorithmCommand
  | SetWeightsCommand
  | SetChemistryCommand
  | StepCommand
  | RunCommand
  | PauseCommand
  | SnapshotCommand
  | ResetCommand;

export type CommandType = Command["type"];

type DistributiveOmit<T, K extends keyof never> = T extends unknown ? Omit<T, K> : never;

/** A command as the UI builds it: the client fills in `v` and `id`. */
export type CommandDraft = DistributiveOmit<Command, "v" | "id"> & { id?: string };

export interface AckEvent {
  v: number;
  type: "ack";
  id: string | null;
  command: CommandType;
}

export interface ErrorEvent {
  v: number;
  type: "error";
  message: string;
  id?: string | null;
}

export interface LoadedEvent {
  v: number;
  type: "loaded";
  node_count: number;
  edge_count: number;
  chemistry: ChemistryId;
}

export interface AppliedRewrite {
  rule: string;
  age: number;
  class: RewriteClass;
}

export interface ReportEvent {
  v: number;
  type: "report";
  step: number;
  matches_found: number;
  applied: AppliedRewrite[];
  node_count: number;
  type_counts: Record<string, number>;
  arrows_combed: number;
  loops_delta: number;
  dead: boolean;
}

export interface StateNode {
  id: string;
  type: string;
  age: number;
}

export interface PortRef {
  node: string;
  port: string;
}

export interface StateEdge {
  tag: string;
  from: PortRef;
  to: PortRef;
}

export interface StateEvent {
  v: number;
  type: "state";
  step: number;
  nodes: StateNode[];
  edges: StateEdge[];
  chemistry: ChemistryId;
  algorithm: AlgorithmId;
  weights: number;
  strategy: StrategyId;
  dead: boolean;
}

export interface DeathEvent {
  v: number;
  type: "death";
  step: number;
}

export type SessionEvent =
  | AckEvent
  | ErrorEvent
  | LoadedEvent
  | ReportEvent
  | StateEvent
  | DeathEvent;

export interface CatalogEntry {
  name: string;
  chemistry: ChemistryId;
  family: string;
  mol: string;
  source: string;
  comments: string;
  expected_status: string;
  period: number | null;
  nodes: number;
}

const EVENT_TYPES = new Set(["ack", "error", "loaded", "report", "state", "death"]);

export function encodeCommand(command: Command): string {
  return JSON.stringify(command);
}

/** Parse one protocol line into an event, or throw with a reason. */
export function decodeEvent(line: string): SessionEvent {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch (err) {
    throw new Error(`not JSON: ${(err as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("event must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  if (obj.v !== PROTOCOL_VERSION) {
    throw new Error(`unsupported protocol version ${String(obj.v)}`);
  }
  if (typeof obj.type !== "string" || !EVENT_TYPES.has(obj.type)) {
    throw new Error(`unknown event type ${String(obj.type)}`);
  }
  return obj as unknown as SessionEvent;
}

let idCounter = 0;

/** Fresh command id; unique within the page, readable in transcripts. */
export function nextCommandId(prefix = "c"): string {
  idCounter += 1;
  return `${prefix}${idCounter}`;
}

export function resetCommandIds(): void {
  idCounter = 0;
}
