// Page flow and run lifecycle. Pure of DOM concerns so the whole state
// machine is drivable against a stub client in tests.

import { INITIAL_POLL_MS, nextPollDelay, type RunPayload, type SessionApi } from './api.js';
import { isReport, TRAITS, type ReportDocument, type Trait, type Weights } from './types.js';

export type Page = 'concepts' | 'define' | 'visualize' | 'further-uses';
export const PAGES: Page[] = ['concepts', 'define', 'visualize', 'further-uses'];

export type RunState = 'idle' | 'running' | 'done' | 'failed';

export const SLIDER_MIN = 0;
export const SLIDER_MAX = 10;

export interface SliderState {
    a: Weights;
    b: Weights;
    masterSeed: number;
}

function zeroWeights(): Weights {
    return Object.fromEntries(TRAITS.map((t) => [t, 0])) as Weights;
}

export function defaultSliders(): SliderState {
    const a = zeroWeights();
    const b = zeroWeights();
    a.reasoning = 8;
    a.memory = 5;
    b.attention = 8;
    b.behavioral_restraint = 5;
    return { a, b, masterSeed: 42 };
}

export function validateWeights(weights: Weights): string | null {
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

export type Sleeper = (ms: number) => Promise<void>;

const realSleep: Sleeper = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export class AppStore {
    page: Page = 'concepts';
    runState: RunState = 'idle';
    sliders: SliderState = defaultSliders();
    cohort: string | null = null;
    sessionId: string | null = null;
    report: ReportDocument | null = null;
    stage: string | null = null;
    error: string | null = null;
    toast: string | null = null;

    private listeners: Array<() => void> = [];

    constructor(
        private readonly client: SessionApi,
        private readonly sleep: Sleeper = realSleep,
    ) {}

    subscribe(listener: () => void): void {
        this.listeners.push(listener);
    }

    private notify(): void {
        for (const listener of this.listeners) listener();
    }

    canVisualize(): boolean {
        return this.report !== null;
    }

    setPage(page: Page): boolean {
        if (page === 'visualize' && !this.canVisualize()) return false;
        this.page = page;
        this.notify();
        return true;
    }

    setSlider(variable: 'a' | 'b', trait: Trait, value: number): void {
        this.sliders[variable][trait] = value;
        this.notify();
    }

    setSeed(seed: number): void {
        this.sliders.masterSeed = seed;
        this.notify();
    }

    validationError(): string | null {
        return validateWeights(this.sliders.a) ?? validateWeights(this.sliders.b);
    }

    buildRunPayload(): RunPayload {
        return {
            weights_a: { ...this.sliders.a },
            weights_b: { ...this.sliders.b },
            master_seed: this.sliders.masterSeed,
        };
    }

    async startRun(): Promise<void> {
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
                if (!this.cohort) throw new Error('no cohort selected');
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
        } catch (err) {
            this.runState = 'failed';
            this.error = err instanceof Error ? err.message : String(err);
            this.notify();
        }
    }

    private async poll(): Promise<void> {
        let delay = INITIAL_POLL_MS;
        for (;;) {
            const body = await this.client.getResults(this.sessionId!);
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
