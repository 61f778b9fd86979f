/** Pure view derivation: server state in, renderable structures out.
 *
 * No matrix arithmetic happens here; entries are read straight off the
 * server's matrix and reformatted.  The rendered data attributes carry the
 * raw matrix so end-to-end tests can compare them with API responses.
 */

import { PotentialSummary, SessionState } from "./api.js";
import { circularPosition, Point } from "./layout.js";

export interface RenderedNode {
  vertex: number;
  label: string;
  badge: string; // d_i
  pos: Point;
}

export interface RenderedEdge {
  from: number;
  to: number;
  /** valued-pair label (b_ij, -b_ji) for the arrow i -> j */
  label: string;
}

export interface PotentialRow {
  degree: number;
  terms: number;
}

export interface RenderedView {
  nodes: RenderedNode[];
  edges: RenderedEdge[];
  history: number[];
  canUndo: boolean;
  twoAcyclic: boolean;
  potential: PotentialRow[];
  /** raw server payloads exposed as data attributes for parity checks */
  data: {
    matrix: number[][];
    initialMatrix: number[][];
  };
}

export function render(
  state: SessionState,
  potential?: PotentialSummary,
): RenderedView {
  const n = state.matrix.n;
  const nodes: RenderedNode[] = state.degrees.map((d, idx) => ({
    vertex: idx + 1,
    label: `v${idx + 1}`,
    badge: `${d}`,
    pos: circularPosition(idx + 1, n),
  }));

  const rows = state.matrix.rows;
  const edges: RenderedEdge[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      const bij = rows[i]?.[j] ?? 0;
      const bji = rows[j]?.[i] ?? 0;
      if (bij > 0) {
        edges.push({ from: i + 1, to: j + 1, label: `(${bij},${-bji})` });
      } else if (bji > 0) {
        edges.push({ from: j + 1, to: i + 1, label: `(${bji},${-bij})` });
      }
    }
  }

  const lastStep = state.steps[state.steps.length - 1];
  const potentialRows: PotentialRow[] = potential
    ? Object.entries(potential.terms_by_degree)
        .map(([deg, terms]) => ({ degree: Number(deg), terms }))
        .sort((a, b) => a.degree - b.degree)
    : [];

  return {
    nodes,
    edges,
    history: [...state.history],
    canUndo: state.can_undo,
    twoAcyclic: lastStep ? lastStep.two_acyclic : true,
    potential: potentialRows,
    data: {
      matrix: rows.map((r) => [...r]),
      initialMatrix: state.initial_matrix.rows.map((r) => [...r]),
    },
  };
}

/** Minimal HTML rendering used by the browser entry point. */
export function toHtml(view: RenderedView): string {
  const nodes = view.nodes
    .map(
      (nd) =>
        `<div class="node" data-vertex="${nd.vertex}" ` +
        `style="left:${nd.pos.x}px;top:${nd.pos.y}px">` +
        `${nd.label}<sup>${nd.badge}</sup></div>`,
    )
    .join("");
  const edges = view.edges
    .map(
      (e) =>
        `<div class="edge" data-from="${e.from}" data-to="${e.to}">` +
        `${e.from}&rarr;${e.to} ${e.label}</div>`,
    )
    .join("");
  const pot = view.potential
    .map((r) => `<tr><td>${r.degree}</td><td>${r.terms}</td></tr>`)
    .join("");
  const badge = view.twoAcyclic
    ? '<span class="ok">2-acyclic</span>'
    : '<span class="bad">not 2-acyclic</span>';
  return (
    `<div class="graph" data-matrix='${JSON.stringify(view.data.matrix)}'>` +
    `${nodes}${edges}</div>` +
    `<div class="history">[${view.history.join(", ")}]</div>` +
    `<div class="status">${badge}</div>` +
    `<table class="potential">${pot}</table>` +
    `<button class="undo"${view.canUndo ? "" : " disabled"}>undo</button>`
  );
}
