// Login view state machine: credentials -> awaiting_second_factor -> done.
// One in-flight status poll at a time (a setTimeout chain, never an
// interval); transient poll failures back off and retry and can never be
// mistaken for success. The countdown starts at the server's expires_in_s
// and only ever decreases.

import { ApiClient, IdentifierInfo, SessionStatus } from './api';

export type Phase = 'credentials' | 'awaiting_second_factor' | 'done';
export type LoginResult = 'success' | 'failure' | 'timeout' | null;

export interface LoginViewState {
  phase: Phase;
  identifier: IdentifierInfo | null;
  countdownS: number;
  result: LoginResult;
}

export interface LoginFlowOptions {
  pollIntervalMs?: number;
  maxBackoffMs?: number;
  onChange?: (state: LoginViewState) => void;
}

const STATUS_RESULTS: Record<Exclude<SessionStatus, 'active'>, Exclude<LoginResult, null>> = {
  succeeded: 'success',
  failed: 'failure',
  timed_out: 'timeout',
};

export class LoginFlow {
  readonly state: LoginViewState = {
    phase: 'credentials',
    identifier: null,
    countdownS: 0,
    result: null,
  };

  private token = '';
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private countdownTimer: ReturnType<typeof setTimeout> | null = null;
  private backoffMs: number;
  private stopped = false;

  constructor(private readonly api: ApiClient, private readonly opts: LoginFlowOptions = {}) {
    this.backoffMs = this.interval;
  }

  private get interval(): number {
    return this.opts.pollIntervalMs ?? 1000;
  }

  private get maxBackoff(): number {
    return this.opts.maxBackoffMs ?? 8000;
  }

  /** Submit the first factor. Throws ApiError (e.g. LIMIT_REACHED) back to
   * the form; on success the flow owns the rest of the lifecycle. */
  async submitCredentials(username: string, password: string): Promise<void> {
    const data = await this.api.login(username, password);
    this.token = data.session_token;
    this.patch({
      phase: 'awaiting_second_factor',
      identifier: data.identifier,
      countdownS: data.expires_in_s,
      result: null,
    });
    this.tickCountdown();
    this.schedulePoll(this.interval);
  }

  stop(): void {
    this.stopped = true;
    if (this.pollTimer !== null) clearTimeout(this.pollTimer);
    if (this.countdownTimer !== null) clearTimeout(this.countdownTimer);
  }

  private patch(partial: Partial<LoginViewState>): void {
    Object.assign(this.state, partial);
    this.opts.onChange?.({ ...this.state });
  }

  private tickCountdown(): void {
    if (this.stopped || this.state.phase !== 'awaiting_second_factor') return;
    this.countdownTimer = setTimeout(() => {
      if (this.state.phase !== 'awaiting_second_factor') return;
      this.patch({ countdownS: Math.max(0, this.state.countdownS - 1) });
      this.tickCountdown();
    }, 1000);
  }

  private schedulePoll(delayMs: number): void {
    if (this.stopped) return;
    this.pollTimer = setTimeout(() => {
      void this.pollOnce();
    }, delayMs);
  }

  private async pollOnce(): Promise<void> {
    if (this.stopped || this.state.phase !== 'awaiting_second_factor') return;
    let status: SessionStatus;
    try {
      status = await this.api.sessionStatus(this.token);
    } catch {
      this.backoffMs = Math.min(this.backoffMs * 2, this.maxBackoff);
      this.schedulePoll(this.backoffMs);
      return;
    }
    this.backoffMs = this.interval;
    if (status === 'active') {
      this.schedulePoll(this.interval);
      return;
    }
    this.patch({ phase: 'done', result: STATUS_RESULTS[status] });
    this.stop();
  }
}
