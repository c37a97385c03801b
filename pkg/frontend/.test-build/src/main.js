// Bootstrap: wires the store to the static page skeleton in index.html.
import { ApiClient } from './api.js';
import { renderVisualize } from './render.js';
import { AppStore, PAGES, SLIDER_MAX, SLIDER_MIN } from './state.js';
import { TRAITS } from './types.js';
const client = new ApiClient('');
const store = new AppStore(client);
const TRAIT_LABELS = {
    memory: 'Memory',
    information_processing_speed: 'Information-processing speed',
    reasoning: 'Reasoning',
    attention: 'Attention',
    behavioral_restraint: 'Behavioral restraint',
};
function byId(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function buildSliders(variable, container) {
    for (const trait of TRAITS) {
        const row = document.createElement('label');
        row.className = 'slider-row';
        const name = document.createElement('span');
        name.textContent = TRAIT_LABELS[trait];
        const input = document.createElement('input');
        input.type = 'range';
        input.min = String(SLIDER_MIN);
        input.max = String(SLIDER_MAX);
        input.step = '0.5';
        input.value = String(store.sliders[variable][trait]);
        input.dataset.variable = variable;
        input.dataset.trait = trait;
        const value = document.createElement('output');
        value.textContent = input.value;
        input.addEventListener('input', () => {
            value.textContent = input.value;
            store.setSlider(variable, trait, Number(input.value));
        });
        row.append(name, input, value);
        container.appendChild(row);
    }
}
function showPage(page) {
    for (const candidate of PAGES) {
        byId(`page-${candidate}`).hidden = candidate !== page;
        byId(`tab-${candidate}`).classList.toggle('active', candidate === page);
    }
}
function updateChrome() {
    const visualizeTab = byId('tab-visualize');
    visualizeTab.disabled = !store.canVisualize();
    showPage(store.page);
    const status = byId('run-status');
    if (store.runState === 'running') {
        status.textContent = `running… ${store.stage ?? ''}`;
    }
    else if (store.runState === 'done') {
        status.textContent = 'done — see the Visualize page';
    }
    else if (store.runState === 'failed') {
        status.textContent = 'failed';
    }
    else {
        status.textContent = '';
    }
    byId('run-error').textContent = store.error ?? '';
    byId('run-toast').textContent = store.toast ?? '';
    byId('run-button').disabled = store.runState === 'running';
    if (store.page === 'visualize') {
        renderVisualize(store, byId('visualize-root'));
    }
}
async function init() {
    buildSliders('a', byId('sliders-a'));
    buildSliders('b', byId('sliders-b'));
    for (const page of PAGES) {
        byId(`tab-${page}`).addEventListener('click', () => {
            store.setPage(page);
        });
    }
    const seedInput = byId('seed-input');
    seedInput.value = String(store.sliders.masterSeed);
    seedInput.addEventListener('change', () => store.setSeed(Number(seedInput.value)));
    byId('run-button').addEventListener('click', () => {
        void store.startRun();
    });
    store.subscribe(updateChrome);
    updateChrome();
    const select = byId('cohort-select');
    try {
        const cohorts = await client.listCohorts();
        select.replaceChildren(...cohorts.map((cohort) => {
            const option = document.createElement('option');
            option.value = cohort.name;
            option.textContent = `${cohort.name} (${cohort.size} candidates)`;
            return option;
        }));
        store.cohort = cohorts[0]?.name ?? null;
        select.addEventListener('change', () => {
            store.cohort = select.value;
            store.sessionId = null; // a new cohort needs a new session
        });
    }
    catch (err) {
        byId('run-error').textContent =
            `cannot reach the service: ${err instanceof Error ? err.message : err}`;
    }
}
void init();
