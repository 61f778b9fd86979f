/** Browser bootstrap for the mutation explorer.
 *
 * Everything interesting lives in api/state/view; this file only wires DOM
 * events.  Guarded so importing it under node (tests) is a no-op.
 */

import { Client } from "./api.js";
import { SessionStore } from "./state.js";
import { render, toHtml } from "./view.js";

interface Preset {
  label: string;
  family: [number, number];
}

export const PRESETS: Preset[] = [
  { label: "family (4,6)", family: [4, 6] },
  { label: "family (8,12)", family: [8, 12] },
  { label: "family (9,15)", family: [9, 15] },
];

export function mount(root: HTMLElement, store: SessionStore): void {
  const redraw = async () => {
    const state = store.state;
    if (!state) return;
    const view = render(state);
    root.innerHTML = toHtml(view);
    root.querySelectorAll<HTMLElement>(".node").forEach((el) => {
      el.addEventListener("click", () => {
        const k = Number(el.dataset.vertex);
        store.clickVertex(k).catch(() => redraw());
      });
    });
    root.querySelector(".undo")?.addEventListener("click", () => {
      store.undo().catch(() => redraw());
    });
  };
  store.onChange(() => void redraw());
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    const store = new SessionStore(new Client(""));
    mount(root, store);
    const preset = PRESETS[0];
    if (preset) {
      void store.start({ family: preset.family, prime: 101, trunc: 6, seed: 0 });
    }
  }
}
