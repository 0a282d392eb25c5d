// Incremental force-directed layout.
//
// The layout is stateful on purpose: node positions persist across state
// snapshots so the graph does not re-scramble every step, and a node seen
// for the first time spawns next to a neighbor that already has a position.
// Plain spring embedding (springs on edges, pairwise repulsion, weak pull to
// the center) with velocity damping; no rendering here, so it runs headless.

import { StateEdge, StateNode } from "./protocol.js";

export interface LayoutNode {
  id: string;
  type: string;
  age: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
  /** set while the user drags; pins the node against the forces */
  fixed: boolean;
}

export interface LayoutEdge {
  tag: string;
  source: string;
  target: string;
}

export interface ForceOptions {
  springLength: number;
  springStrength: number;
  repulsion: number;
  centerPull: number;
  damping: number;
  maxSpeed: number;
}

const DEFAULTS: ForceOptions = {
  springLength: 60,
  springStrength: 0.04,
  repulsion: 1800,
  centerPull: 0.005,
  damping: 0.85,
  maxSpeed: 12,
};

/** Small deterministic RNG (mulberry32) so layouts are reproducible. */
export function makeRng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class ForceLayout {
  nodes = new Map<string, LayoutNode>();
  edges: LayoutEdge[] = [];
  readonly options: ForceOptions;
  private rng: () => number;

  constructor(
    public width: number,
    public height: number,
    seed = 1,
    options: Partial<ForceOptions> = {},
  ) {
    this.options = { ...DEFAULTS, ...options };
    this.rng = makeRng(seed);
  }

  /**
   * Reconcile the layout with a fresh snapshot.  Surviving nodes keep their
   * position and velocity; vanished nodes are dropped; brand-new nodes are
   * placed near the average of their already-placed neighbors, or at a
   * random spot when nothing connects them yet.
   */
  setGraph(nodes: StateNode[], edges: StateEdge[]): void {
    const incoming = new Map(nodes.map((n) => [n.id, n]));
    for (const id of [...this.nodes.keys()]) {
      if (!incoming.has(id)) {
        this.nodes.delete(id);
      }
    }
    this.edges = edges.map((e) => ({ tag: e.tag, source: e.from.node, target: e.to.node }));

    const neighborhood = new Map<string, string[]>();
    const link = (from: string, to: string) => {
      let list = neighborhood.get(from);
      if (list === undefined) {
        list = [];
        neighborhood.set(from, list);
      }
      list.push(to);
    };
    for (const e of this.edges) {
      link(e.source, e.target);
      link(e.target, e.source);
    }

    for (const n of nodes) {
      const existing = this.nodes.get(n.id);
      if (existing !== undefined) {
        existing.type = n.type;
        existing.age = n.age;
        continue;
      }
      this.nodes.set(n.id, this.spawn(n, neighborhood.get(n.id) ?? []));
    }
  }

  private spawn(n: StateNode, neighbors: string[]): LayoutNode {
    const placed = neighbors
      .map((id) => this.nodes.get(id))
      .filter((p): p is LayoutNode => p !== undefined);
    let x: number;
    let y: number;
    if (placed.length > 0) {
      const cx = placed.reduce((s, p) => s + p.x, 0) / placed.length;
      const cy = placed.reduce((s, p) => s + p.y, 0) / placed.length;
      const angle = this.rng() * 2 * Math.PI;
      const r = this.options.springLength * (0.3 + 0.4 * this.rng());
      x = cx + r * Math.cos(angle);
      y = cy + r * Math.sin(angle);
    } else {
      x = this.width * (0.25 + 0.5 * this.rng());
      y = this.height * (0.25 + 0.5 * this.rng());
    }
    return { id: n.id, type: n.type, age: n.age, x, y, vx: 0, vy: 0, fixed: false };
  }

  /** Advance the simulation; a few iterations per animation frame suffice. */
  tick(iterations = 1): void {
    const o = this.options;
    const all = [...this.nodes.values()];
    for (let it = 0; it < iterations; it++) {
      for (let i = 0; i < all.length; i++) {
        for (let j = i + 1; j < all.length; j++) {
          const a = all[i];
          const b = all[j];
          let dx = a.x - b.x;
          let dy = a.y - b.y;
          let d2 = dx * dx + dy * dy;
          if (d2 < 1) {
            // coincident nodes: deterministic nudge apart
            dx = 0.5 + (i % 3) * 0.25;
            dy = 0.5 + (j % 3) * 0.25;
            d2 = dx * dx + dy * dy;
          }
          const f = o.repulsion / d2;
          const d = Math.sqrt(d2);
          const ux = dx / d;
          const uy = dy / d;
          a.vx += ux * f * 0.01;
          a.vy += uy * f * 0.01;
          b.vx -= ux * f * 0.01;
          b.vy -= uy * f * 0.01;
        }
      }
      for (const e of this.edges) {
        const a = this.nodes.get(e.source);
        const b = this.nodes.get(e.target);
        if (a === undefined || b === undefined || a === b) {
          continue;
        }
        const dx = b.x - a.x;
        const dy = b.y - a.y;
        const d = Math.max(1, Math.sqrt(dx * dx + dy * dy));
        const stretch = (d - o.springLength) * o.springStrength;
        const ux = dx / d;
        const uy = dy / d;
        a.vx += ux * stretch;
        a.vy += uy * stretch;
        b.vx -= ux * stretch;
        b.vy -= uy * stretch;
      }
      const cx = this.width / 2;
      const cy = this.height / 2;
      for (const n of all) {
        n.vx += (cx - n.x) * o.centerPull;
        n.vy += (cy - n.y) * o.centerPull;
        n.vx *= o.damping;
        n.vy *= o.damping;
        const speed = Math.sqrt(n.vx * n.vx + n.vy * n.vy);
        if (speed > o.maxSpeed) {
          n.vx *= o.maxSpeed / speed;
          n.vy *= o.maxSpeed / speed;
        }
        if (!n.fixed) {
          n.x += n.vx;
          n.y += n.vy;
        }
      }
    }
  }

  /** Total squared velocity; a settling layout drives this toward zero. */
  kineticEnergy(): number {
    let total = 0;
    for (const n of this.nodes.values()) {
      total += n.vx * n.vx + n.vy * n.vy;
    }
    return total;
  }
}
