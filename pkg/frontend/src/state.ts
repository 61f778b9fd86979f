/** Session store: queues vertex clicks so at most one request is in flight,
 * keeps the last server state, and records the matrix trace for parity
 * checks.  All state transitions come from server responses.
 */

import { ApiError, Client, MatrixJson, SessionRequest, SessionState } from "./api.js";

export type Listener = (state: SessionState) => void;

export class SessionStore {
  private chain: Promise<unknown> = Promise.resolve();
  private listeners: Listener[] = [];
  state: SessionState | null = null;
  /** matrices after each applied mutation, oldest first */
  readonly trace: MatrixJson[] = [];
  lastError: ApiError | null = null;

  constructor(private readonly client: Client) {}

  onChange(fn: Listener): void {
    this.listeners.push(fn);
  }

  private setState(state: SessionState): SessionState {
    this.state = state;
    for (const fn of this.listeners) fn(state);
    return state;
  }

  /** Serialize operations: clicks issued while a request is in flight run
   * afterwards, in click order. */
  private enqueue<T>(op: () => Promise<T>): Promise<T> {
    const next = this.chain.then(op);
    this.chain = next.catch(() => undefined);
    return next;
  }

  start(req: SessionRequest): Promise<SessionState> {
    return this.enqueue(async () => {
      const state = await this.client.createSession(req);
      this.trace.length = 0;
      this.lastError = null;
      return this.setState(state);
    });
  }

  get canUndo(): boolean {
    return this.state?.can_undo ?? false;
  }

  /** True when the server reported the current state unfit for mutation. */
  get mutationBlocked(): boolean {
    const steps = this.state?.steps ?? [];
    const last = steps[steps.length - 1];
    return last !== undefined && !last.two_acyclic;
  }

  clickVertex(k: number): Promise<SessionState> {
    return this.enqueue(async () => {
      const cur = this.require();
      try {
        const state = await this.client.mutate(cur.id, k);
        this.trace.push(state.matrix);
        this.lastError = null;
        return this.setState(state);
      } catch (err) {
        if (err instanceof ApiError) this.lastError = err;
        throw err;
      }
    });
  }

  undo(): Promise<SessionState> {
    return this.enqueue(async () => {
      const cur = this.require();
      const state = await this.client.undo(cur.id);
      this.trace.pop();
      this.lastError = null;
      return this.setState(state);
    });
  }

  private require(): SessionState {
    if (this.state === null) throw new Error("no active session");
    return this.state;
  }
}
