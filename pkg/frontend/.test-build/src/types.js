// Mirrors the report document schema served at /api/schema/report.
// A null rate is the explicit undefined marker (0/0) and renders as "n/a".
export const TRAITS = [
    'memory',
    'information_processing_speed',
    'reasoning',
    'attention',
    'behavioral_restraint',
];
export function isReport(body) {
    return body.kind === 'simulation_report';
}
