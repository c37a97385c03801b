// Page flow and run lifecycle. Pure of DOM concerns so the whole state
// machine is drivable against a stub client in tests.
import { INITIAL_POLL_MS, nextPollDelay } from './api.js';
import { isReport, TRAITS } from './types.js';
export const PAGES = ['concepts', 'define', 'visualize', 'further-uses'];
export const SLIDER_MIN = 0;
export const SLIDER_MAX = 10;
function zeroWeights() {
    return Object.fromEntries(TRAITS.map((t) => [t, 0]));
}
export function defaultSliders() {
    const a = zeroWeights();
    const b = zeroWeights();
    a.reasoning = 8;
    a.memory = 5;
    b.attention = 8;
    b.behavioral_restraint = 5;
    return { a, b, masterSeed: 42 };
}
export function validateWeights(weights) {
    for (const trait of TRAITS) {
        const value = weights[trait];
        if (!Number.isFinite(value) || value < SLIDER_MIN || value > SLIDER_MAX) {
            return `${trait} must be between ${SLIDER_MIN} and ${SLIDER_MAX}`;
        }
    }
    if (TRAITS.every((t) => weights[t] === 0)) {
        return 'at least one trait must have positive importance';
    }
    return null;
}
const realSleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));
export class AppStore {
    client;
    sleep;
    page = 'concepts';
    runState = 'idle';
    sliders = defaultSliders();
    cohort = null;
    sessionId = null;
    report = null;
    stage = null;
    error = null;
    toast = null;
    listeners = [];
    constructor(client, sleep = realSleep) {
        this.client = client;
        this.sleep = sleep;
    }
    subscribe(listener) {
        this.listeners.push(listener);
    }
    notify() {
        for (const listener of this.listeners)
            listener();
    }
    canVisualize() {
        return this.report !== null;
    }
    setPage(page) {
        if (page === 'visualize' && !this.canVisualize())
            return false;
        this.page = page;
        this.notify();
        return true;
    }
    setSlider(variable, trait, value) {
        this.sliders[variable][trait] = value;
        this.notify();
    }
    setSeed(seed) {
        this.sliders.masterSeed = seed;
        this.notify();
    }
    validationError() {
        return validateWeights(this.sliders.a) ?? validateWeights(this.sliders.b);
    }
    buildRunPayload() {
        return {
            weights_a: { ...this.sliders.a },
            weights_b: { ...this.sliders.b },
            master_seed: this.sliders.masterSeed,
        };
    }
    async startRun() {
        const invalid = this.validationError();
        if (invalid) {
            this.error = invalid;
            this.notify();
            return;
        }
        this.error = null;
        this.toast = null;
        try {
            if (!this.sessionId) {
                if (!this.cohort)
                    throw new Error('no cohort selected');
                this.sessionId = await this.client.createSession(this.cohort);
            }
            const outcome = await this.client.startRun(this.sessionId, this.buildRunPayload());
            if (outcome.kind === 'conflict') {
                // non-blocking: sliders stay editable, nothing else changes
                this.toast = 'a run is already in progress';
                this.notify();
                return;
            }
            if (outcome.kind === 'error') {
                this.error = outcome.message;
                this.notify();
                return;
            }
            this.runState = 'running';
            this.stage = 'queued';
            this.notify();
            await this.poll();
        }
        catch (err) {
            this.runState = 'failed';
            this.error = err instanceof Error ? err.message : String(err);
            this.notify();
        }
    }
    async poll() {
        let delay = INITIAL_POLL_MS;
        for (;;) {
            const body = await this.client.getResults(this.sessionId);
            if (isReport(body)) {
                // one immutable snapshot per run: charts never mix runs
                this.report = body;
                this.runState = 'done';
                this.stage = null;
                this.page = 'visualize';
                this.notify();
                return;
            }
            if (body.state === 'failed') {
                this.runState = 'failed';
                this.error = body.error?.message ?? 'run failed';
                this.stage = null;
                this.notify();
                return;
            }
            this.stage = body.stage ?? body.state;
            this.notify();
            await this.sleep(delay);
            delay = nextPollDelay(delay);
        }
    }
}
