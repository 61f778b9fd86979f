import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { Client, MatrixJson } from "../src/api.js";
import { SessionStore } from "../src/state.js";
import { fakeFetch, loadExchanges } from "./fakefetch.js";

interface CliTrace {
  ok: boolean;
  sequence: number[];
  mutations_performed: number;
  steps: { vertex: number; matrix: MatrixJson; matches_matrix_mutation: boolean }[];
}

const cliTrace = JSON.parse(
  readFileSync(
    fileURLToPath(new URL("./fixtures/cli_trace.json", import.meta.url)),
    "utf8",
  ),
) as CliTrace;

const CLICKS = [1, 2, 1, 2, 1, 2];

describe("explorer / CLI parity", () => {
  it("six scripted clicks on the (4,6) preset reproduce the CLI mutate trace", async () => {
    const store = new SessionStore(
      new Client("", fakeFetch(loadExchanges("http_session.json"))),
    );
    await store.start({ family: [4, 6], prime: 101, trunc: 6, seed: 0 });
    for (const k of CLICKS) await store.clickVertex(k);

    expect(cliTrace.ok).toBe(true);
    expect(cliTrace.sequence).toEqual(CLICKS);
    expect(store.state?.history).toEqual(CLICKS);
    expect(store.trace).toHaveLength(cliTrace.steps.length);
    for (let i = 0; i < cliTrace.steps.length; i++) {
      expect(store.trace[i]).toEqual(cliTrace.steps[i]?.matrix);
      expect(store.state?.steps[i]?.vertex).toBe(cliTrace.steps[i]?.vertex);
    }
  });

  it("undo walks back through every prior state down to the initial one", async () => {
    const store = new SessionStore(
      new Client("", fakeFetch(loadExchanges("http_session.json"))),
    );
    const initial = await store.start({
      family: [4, 6],
      prime: 101,
      trunc: 6,
      seed: 0,
    });
    const afterClick: MatrixJson[] = [];
    for (const k of CLICKS) {
      const s = await store.clickVertex(k);
      afterClick.push(s.matrix);
    }

    for (let i = CLICKS.length - 1; i >= 0; i--) {
      const s = await store.undo();
      const expected = i === 0 ? initial.matrix : afterClick[i - 1];
      expect(s.matrix).toEqual(expected);
      expect(s.history).toEqual(CLICKS.slice(0, i));
      expect(store.trace).toHaveLength(i);
    }
    expect(store.state?.matrix).toEqual(initial.matrix);
    expect(store.canUndo).toBe(false);
  });
});
