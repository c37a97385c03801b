// DOM rendering. Bars are plain divs whose widths come from report values;
// the printed numbers are the report values verbatim (formatValue), with
// "n/a" for undefined markers.
import { formatDelta, formatValue, reportToCharts } from './charts.js';
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function barRow(label, value, model, scale = 1) {
    const row = el('div', 'bar-row');
    row.appendChild(el('span', 'bar-label', label));
    const track = el('div', 'bar-track');
    if (value === null) {
        track.appendChild(el('span', 'bar-na', 'n/a'));
    }
    else {
        const bar = el('div', `bar bar-${model}`);
        const width = Math.max(0, Math.min(1, value / scale)) * 100;
        bar.style.width = `${width}%`;
        track.appendChild(bar);
    }
    row.appendChild(track);
    row.appendChild(el('span', 'bar-value', formatValue(value)));
    return row;
}
function chartCard(series) {
    const card = el('section', 'chart-card');
    card.appendChild(el('h3', undefined, series.title));
    const scale = series.kind === 'confusion_grid'
        ? Math.max(1, ...series.points.flatMap((p) => [p.a ?? 0, p.b ?? 0]))
        : 1;
    for (const point of series.points) {
        const group = el('div', 'chart-group');
        const header = el('div', 'chart-group-header');
        header.appendChild(el('span', 'chart-category', point.category));
        header.appendChild(el('span', 'delta-badge', `Δ ${formatDelta(point.delta)}`));
        group.appendChild(header);
        group.appendChild(barRow('A', point.a, 'a', scale));
        group.appendChild(barRow('B', point.b, 'b', scale));
        card.appendChild(group);
    }
    return card;
}
function rankTable(rows) {
    const card = el('section', 'chart-card rank-card');
    card.appendChild(el('h3', undefined, 'largest individual rank changes (A → B)'));
    const table = el('table', 'rank-table');
    const head = el('tr');
    for (const title of ['candidate', 'rank A', 'rank B', 'Δ rank']) {
        head.appendChild(el('th', undefined, title));
    }
    table.appendChild(head);
    const movers = [...rows].sort((x, y) => Math.abs(y.rank_delta) - Math.abs(x.rank_delta));
    for (const row of movers.slice(0, 15)) {
        const tr = el('tr');
        tr.appendChild(el('td', undefined, row.candidate_id));
        tr.appendChild(el('td', undefined, String(row.rank_a)));
        tr.appendChild(el('td', undefined, String(row.rank_b)));
        tr.appendChild(el('td', row.rank_delta === 0 ? undefined : 'rank-moved', String(row.rank_delta)));
        table.appendChild(tr);
    }
    card.appendChild(table);
    return card;
}
export function renderVisualize(store, container) {
    container.replaceChildren();
    const report = store.report;
    if (!report) {
        container.appendChild(el('p', 'muted', 'run a simulation on the Define page first'));
        return;
    }
    const summary = el('section', 'chart-card');
    summary.appendChild(el('h3', undefined, 'overall'));
    const accuracy = el('p');
    accuracy.textContent =
        `accuracy (test split): A ${formatValue(report.models.a.evaluation.accuracy)} · ` +
            `B ${formatValue(report.models.b.evaluation.accuracy)} · ` +
            `Δ ${formatDelta(report.deltas.accuracy)}`;
    summary.appendChild(accuracy);
    const selection = el('p');
    selection.textContent =
        `selection rate (full cohort): A ${formatValue(report.models.a.selection.overall.rate)} · ` +
            `B ${formatValue(report.models.b.selection.overall.rate)} · ` +
            `Δ ${formatDelta(report.deltas.selection_rate_overall)}`;
    summary.appendChild(selection);
    container.appendChild(summary);
    const charts = reportToCharts(report);
    const demographics = el('div');
    demographics.appendChild(el('h2', undefined, 'Demographics'));
    const nonDemographics = el('div');
    nonDemographics.appendChild(el('h2', undefined, 'Non-demographics'));
    for (const series of charts) {
        const target = series.kind === 'confusion_grid' ? nonDemographics : demographics;
        target.appendChild(chartCard(series));
    }
    nonDemographics.appendChild(rankTable(report.deltas.rank_table));
    container.appendChild(demographics);
    container.appendChild(nonDemographics);
}
