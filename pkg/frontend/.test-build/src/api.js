// Thin HTTP client over the session API. The fetch function is injectable
// so the state machine can be driven against a stub server in tests.
export const INITIAL_POLL_MS = 500;
export const MAX_POLL_MS = 5000;
export function nextPollDelay(previousMs) {
    return Math.min(previousMs * 1.5, MAX_POLL_MS);
}
export class ApiError extends Error {
    status;
    constructor(message, status) {
        super(message);
        this.status = status;
    }
}
async function errorMessage(response) {
    try {
        const body = await response.json();
        return body?.error?.message ?? `HTTP ${response.status}`;
    }
    catch {
        return `HTTP ${response.status}`;
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = '', fetchFn = (...args) => fetch(...args)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        return this.fetchFn(`${this.baseUrl}${path}`, {
            headers: { 'Content-Type': 'application/json' },
            ...init,
        });
    }
    async listCohorts() {
        const response = await this.request('/api/cohorts');
        if (!response.ok)
            throw new ApiError(await errorMessage(response), response.status);
        return (await response.json()).cohorts;
    }
    async createSession(cohort) {
        const response = await this.request('/api/sessions', {
            method: 'POST',
            body: JSON.stringify({ cohort }),
        });
        if (!response.ok)
            throw new ApiError(await errorMessage(response), response.status);
        return (await response.json()).session_id;
    }
    async startRun(sessionId, payload) {
        const response = await this.request(`/api/sessions/${sessionId}/run`, {
            method: 'POST',
            body: JSON.stringify(payload),
        });
        if (response.status === 409)
            return { kind: 'conflict' };
        if (!response.ok)
            return { kind: 'error', message: await errorMessage(response) };
        return { kind: 'accepted' };
    }
    async getResults(sessionId) {
        const response = await this.request(`/api/sessions/${sessionId}/results`);
        if (!response.ok)
            throw new ApiError(await errorMessage(response), response.status);
        return (await response.json());
    }
}
