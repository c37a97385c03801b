// Thin HTTP client over the session API. The fetch function is injectable
// so the state machine can be driven against a stub server in tests.

import type { CohortInfo, ResultsResponse, Weights } from './types.js';

export const INITIAL_POLL_MS = 500;
export const MAX_POLL_MS = 5000;

export function nextPollDelay(previousMs: number): number {
    return Math.min(previousMs * 1.5, MAX_POLL_MS);
}

export interface RunPayload {
    weights_a: Weights;
    weights_b: Weights;
    master_seed: number;
}

export type RunOutcome =
    | { kind: 'accepted' }
    | { kind: 'conflict' }
    | { kind: 'error'; message: string };

export class ApiError extends Error {
    constructor(message: string, readonly status: number) {
        super(message);
    }
}

async function errorMessage(response: Response): Promise<string> {
    try {
        const body = await response.json();
        return body?.error?.message ?? `HTTP ${response.status}`;
    } catch {
        return `HTTP ${response.status}`;
    }
}

export interface SessionApi {
    listCohorts(): Promise<CohortInfo[]>;
    createSession(cohort: string): Promise<string>;
    startRun(sessionId: string, payload: RunPayload): Promise<RunOutcome>;
    getResults(sessionId: string): Promise<ResultsResponse>;
}

export class ApiClient implements SessionApi {
    constructor(
        private readonly baseUrl: string = '',
        private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
    ) {}

    private async request(path: string, init?: RequestInit): Promise<Response> {
        return this.fetchFn(`${this.baseUrl}${path}`, {
            headers: { 'Content-Type': 'application/json' },
            ...init,
        });
    }

    async listCohorts(): Promise<CohortInfo[]> {
        const response = await this.request('/api/cohorts');
        if (!response.ok) throw new ApiError(await errorMessage(response), response.status);
        return (await response.json()).cohorts as CohortInfo[];
    }

    async createSession(cohort: string): Promise<string> {
        const response = await this.request('/api/sessions', {
            method: 'POST',
            body: JSON.stringify({ cohort }),
        });
        if (!response.ok) throw new ApiError(await errorMessage(response), response.status);
        return (await response.json()).session_id as string;
    }

    async startRun(sessionId: string, payload: RunPayload): Promise<RunOutcome> {
        const response = await this.request(`/api/sessions/${sessionId}/run`, {
            method: 'POST',
            body: JSON.stringify(payload),
        });
        if (response.status === 409) return { kind: 'conflict' };
        if (!response.ok) return { kind: 'error', message: await errorMessage(response) };
        return { kind: 'accepted' };
    }

    async getResults(sessionId: string): Promise<ResultsResponse> {
        const response = await this.request(`/api/sessions/${sessionId}/results`);
        if (!response.ok) throw new ApiError(await errorMessage(response), response.status);
        return (await response.json()) as ResultsResponse;
    }
}
