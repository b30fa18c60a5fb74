// Wire client for the login/registration flow. The second factor travels
// device -> server only, so this client deliberately has no /api/2fa/*
// surface at all.

export type ErrorCode = 'DUPLICATE_USER' | 'LIMIT_REACHED' | 'UNKNOWN_TOKEN' | 'REJECTED' | 'MALFORMED';

export interface WireError {
  code: ErrorCode;
  message: string;
}

export interface Envelope<T> {
  ok: boolean;
  data: T | null;
  error: WireError | null;
}

export type IdentifierKind = 'pattern' | 'qr' | 'numeric';

export interface IdentifierInfo {
  kind: IdentifierKind;
  display: number[] | string;
  canonical: string;
}

export interface LoginData {
  session_token: string;
  identifier: IdentifierInfo;
  expires_in_s: number;
}

export type SessionStatus = 'active' | 'succeeded' | 'failed' | 'timed_out';

export class ApiError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(readonly baseUrl = '', fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let envelope: Envelope<T>;
    try {
      const resp = await this.fetchFn(this.baseUrl + path, init);
      envelope = (await resp.json()) as Envelope<T>;
    } catch (err) {
      throw new ApiError('NETWORK', err instanceof Error ? err.message : String(err));
    }
    if (!envelope.ok || envelope.data === null) {
      const error = envelope.error ?? { code: 'MALFORMED' as ErrorCode, message: 'malformed envelope' };
      throw new ApiError(error.code, error.message);
    }
    return envelope.data;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  register(username: string, password: string, kind: IdentifierKind): Promise<{ provisioning_payload: string }> {
    return this.post('/api/register', { username, password, kind });
  }

  login(username: string, password: string): Promise<LoginData> {
    return this.post('/api/login', { username, password });
  }

  async sessionStatus(token: string): Promise<SessionStatus> {
    const data = await this.request<{ status: SessionStatus }>(
      `/api/session/${encodeURIComponent(token)}/status`,
    );
    return data.status;
  }
}
