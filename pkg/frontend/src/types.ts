// Mirrors the report document schema served at /api/schema/report.
// A null rate is the explicit undefined marker (0/0) and renders as "n/a".

export const TRAITS = [
    'memory',
    'information_processing_speed',
    'reasoning',
    'attention',
    'behavioral_restraint',
] as const;

export type Trait = (typeof TRAITS)[number];
export type Weights = Record<Trait, number>;
export type Rate = number | null;

export interface Confusion {
    tp: number;
    fp: number;
    fn: number;
    tn: number;
}

export interface GroupMetricsRow {
    group: string;
    count: number;
    selected: number;
    selection_rate: Rate;
    tpr: Rate;
    fpr: Rate;
    ppv: Rate;
    npv: Rate;
    confusion: Confusion;
}

export interface SelectionRow {
    group: string;
    count: number;
    selected: number;
    rate: Rate;
}

export interface LabelRow {
    group: string;
    positive: number;
    negative: number;
    positive_share: Rate;
}

export interface ScoreRow {
    group: string;
    count: number;
    min: Rate;
    q1: Rate;
    median: Rate;
    q3: Rate;
    max: Rate;
}

export interface ModelSection {
    feature_weights: Weights;
    bias: number;
    training: {
        iterations: number;
        objective: number;
        converged: boolean;
        train_size: number;
        test_size: number;
        train_positives: number;
        test_positives: number;
    };
    labeling: { top_subset_size: number; positive_count: number; sampling_seed: number };
    evaluation: {
        basis: string;
        accuracy: Rate;
        confusion: Confusion;
        by_attribute: Record<string, GroupMetricsRow[]>;
    };
    selection: {
        basis: string;
        overall: { count: number; selected: number; rate: Rate };
        by_attribute: Record<string, SelectionRow[]>;
    };
    label_distribution: {
        basis: string;
        overall: { positive: number; negative: number; positive_share: Rate };
        by_attribute: Record<string, LabelRow[]>;
    };
    score_distribution: { basis: string; by_attribute: Record<string, ScoreRow[]> };
    predictions: unknown[];
}

export interface DeltaRow {
    group: string;
    delta: Rate;
}

export interface FairnessDeltaRow {
    group: string;
    tpr: Rate;
    fpr: Rate;
    ppv: Rate;
    npv: Rate;
    selection_rate: Rate;
}

export interface RankRow {
    candidate_id: string;
    rank_a: number;
    rank_b: number;
    rank_delta: number;
    decision_score_a: number;
    decision_score_b: number;
}

export interface ReportDocument {
    schema_version: string;
    kind: 'simulation_report';
    config: {
        cohort: { kind: string; source: string; seed: number | null; size: number };
        weights_a: Weights;
        weights_b: Weights;
        master_seed: number;
        derived_seeds: { label_a: number; label_b: number; split: number };
        policy: Record<string, number>;
        train: Record<string, number | boolean>;
    };
    models: { a: ModelSection; b: ModelSection };
    deltas: {
        accuracy: Rate;
        selection_rate_overall: Rate;
        selection_rates: Record<string, DeltaRow[]>;
        fairness: Record<string, FairnessDeltaRow[]>;
        label_positive_share: Record<string, DeltaRow[]>;
        score_median: Record<string, DeltaRow[]>;
        rank_table: RankRow[];
    };
}

export interface StatusResponse {
    state: 'new' | 'configured' | 'running' | 'failed';
    stage?: string | null;
    error?: { code: string; message: string };
}

export type ResultsResponse = ReportDocument | StatusResponse;

export function isReport(body: ResultsResponse): body is ReportDocument {
    return (body as ReportDocument).kind === 'simulation_report';
}

export interface CohortInfo {
    name: string;
    size: number;
    kind: string;
}
