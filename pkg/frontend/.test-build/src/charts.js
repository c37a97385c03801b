// Report document -> chart series. Numerically inert by contract: every
// value is copied verbatim from the report; the only formatting applied
// to deltas is display rounding. Undefined markers (null) stay null and
// render as "n/a", never 0.
export const FAIRNESS_METRICS = ['tpr', 'fpr', 'ppv', 'npv'];
const METRIC_LABELS = {
    tpr: 'true positive rate',
    fpr: 'false positive rate',
    ppv: 'positive predictive value',
    npv: 'negative predictive value',
};
export function formatValue(value) {
    if (value === null || value === undefined)
        return 'n/a';
    return String(value);
}
export function formatDelta(value) {
    if (value === null || value === undefined)
        return 'n/a';
    const fixed = value.toFixed(3);
    return value > 0 ? `+${fixed}` : fixed;
}
function box(row) {
    return { min: row.min, q1: row.q1, median: row.median, q3: row.q3, max: row.max };
}
export function reportToCharts(report) {
    const charts = [];
    const { models, deltas } = report;
    const attributes = Object.keys(models.a.selection.by_attribute);
    for (const attribute of attributes) {
        const rowsA = models.a.selection.by_attribute[attribute];
        const rowsB = new Map(models.b.selection.by_attribute[attribute].map((r) => [r.group, r]));
        const deltaRows = new Map(deltas.selection_rates[attribute].map((r) => [r.group, r]));
        charts.push({
            kind: 'selection_by_group',
            title: `selection rate by ${attribute}`,
            attribute,
            points: rowsA.map((row) => ({
                category: row.group,
                a: row.rate,
                b: rowsB.get(row.group)?.rate ?? null,
                delta: deltaRows.get(row.group)?.delta ?? null,
            })),
        });
    }
    for (const attribute of attributes) {
        const rowsA = models.a.evaluation.by_attribute[attribute];
        const rowsB = new Map(models.b.evaluation.by_attribute[attribute].map((r) => [r.group, r]));
        const deltaRows = new Map(deltas.fairness[attribute].map((r) => [r.group, r]));
        for (const metric of FAIRNESS_METRICS) {
            charts.push({
                kind: 'fairness_metric',
                title: `${METRIC_LABELS[metric]} by ${attribute}`,
                attribute,
                metric,
                points: rowsA.map((row) => ({
                    category: row.group,
                    a: row[metric],
                    b: rowsB.get(row.group)?.[metric] ?? null,
                    delta: deltaRows.get(row.group)?.[metric] ?? null,
                })),
            });
        }
    }
    for (const attribute of attributes) {
        const rowsA = models.a.label_distribution.by_attribute[attribute];
        const rowsB = new Map(models.b.label_distribution.by_attribute[attribute].map((r) => [r.group, r]));
        const deltaRows = new Map(deltas.label_positive_share[attribute].map((r) => [r.group, r]));
        charts.push({
            kind: 'label_distribution',
            title: `positive-label share by ${attribute}`,
            attribute,
            points: rowsA.map((row) => ({
                category: row.group,
                a: row.positive_share,
                b: rowsB.get(row.group)?.positive_share ?? null,
                delta: deltaRows.get(row.group)?.delta ?? null,
            })),
        });
    }
    for (const attribute of attributes) {
        const rowsA = models.a.score_distribution.by_attribute[attribute];
        const rowsB = new Map(models.b.score_distribution.by_attribute[attribute].map((r) => [r.group, r]));
        const deltaRows = new Map(deltas.score_median[attribute].map((r) => [r.group, r]));
        charts.push({
            kind: 'score_distribution',
            title: `composite score distribution by ${attribute}`,
            attribute,
            points: rowsA.map((row) => {
                const other = rowsB.get(row.group);
                return {
                    category: row.group,
                    a: row.median,
                    b: other?.median ?? null,
                    delta: deltaRows.get(row.group)?.delta ?? null,
                    boxA: box(row),
                    boxB: other ? box(other) : undefined,
                };
            }),
        });
    }
    charts.push({
        kind: 'confusion_grid',
        title: 'confusion matrix (test split)',
        points: ['tp', 'fp', 'fn', 'tn'].map((cell) => ({
            category: cell,
            a: models.a.evaluation.confusion[cell],
            b: models.b.evaluation.confusion[cell],
            delta: models.b.evaluation.confusion[cell] - models.a.evaluation.confusion[cell],
        })),
    });
    return charts;
}
