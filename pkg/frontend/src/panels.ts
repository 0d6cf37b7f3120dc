// DOM panels: instruction input with parse display, run controls, status bar.

import type { NavClient } from './api.js';
import type { ParseView, Snapshot } from './types.js';

const LABEL_CLASS: Record<string, string> = {
  goal: 'chip chip-goal',
  constraint: 'chip chip-constraint',
  uninformative: 'chip chip-filler',
};

export function renderParse(container: HTMLElement, parse: ParseView): void {
  container.textContent = '';
  if (parse.error && !parse.applied) {
    const err = document.createElement('div');
    err.className = 'parse-error';
    err.textContent = parse.error;
    container.appendChild(err);
  }
  for (const phrase of parse.phrases) {
    const row = document.createElement('div');
    row.className = 'phrase-row';

    const chip = document.createElement('span');
    chip.className = LABEL_CLASS[phrase.label] ?? 'chip';
    chip.textContent = phrase.label;
    chip.title = phrase.probs.map((p, i) => `${['goal', 'constraint', 'uninformative'][i]}: ${p.toFixed(3)}`).join('\n');
    row.appendChild(chip);

    const words = phrase.surface.split(' ');
    const weights = phrase.attention;
    const maxW = weights ? Math.max(...weights) : 0;
    words.forEach((word, i) => {
      const span = document.createElement('span');
      span.className = 'token';
      span.textContent = word;
      if (weights && maxW > 0) {
        // Higher attention -> stronger (less transparent) highlight.
        span.style.backgroundColor = `rgba(63, 167, 255, ${(0.85 * weights[i]) / maxW})`;
        span.title = `attention ${weights[i].toFixed(3)}`;
      }
      row.appendChild(span);
    });

    if (phrase.nouns.length) {
      const nouns = document.createElement('span');
      nouns.className = 'nouns';
      nouns.textContent = `→ ${phrase.nouns.join(', ')}`;
      row.appendChild(nouns);
    }
    container.appendChild(row);
  }
  if (parse.goal) {
    const g = document.createElement('div');
    g.className = 'goal-line';
    g.textContent = `goal: ${parse.goal.location} @ (${parse.goal.position[0].toFixed(1)}, ${parse.goal.position[1].toFixed(1)}), score ${parse.goal.score.toFixed(2)}`;
    container.appendChild(g);
  }
}

export function renderStatus(container: HTMLElement, snap: Snapshot): void {
  const m = snap.metrics;
  const clearances = Object.entries(m.min_clearance)
    .map(([k, v]) => `${k} ${v.toFixed(2)}m`)
    .join('  ');
  container.textContent =
    `tick ${snap.tick}  t=${snap.t.toFixed(1)}s  ${snap.status}  mode=${snap.mode}` +
    `  path ${m.length.toFixed(2)}m` +
    (clearances ? `  | min dist: ${clearances}` : '');
}

export interface Controls {
  root: HTMLElement;
}

export function buildControls(
  client: NavClient,
  sessionId: string,
  onError: (msg: string) => void,
): Controls {
  const root = document.createElement('div');
  root.className = 'controls';

  const mk = (label: string, onClick: () => void) => {
    const btn = document.createElement('button');
    btn.textContent = label;
    btn.addEventListener('click', () => {
      Promise.resolve()
        .then(onClick)
        .catch((e) => onError(String(e)));
    });
    root.appendChild(btn);
    return btn;
  };

  const steps = document.createElement('input');
  steps.type = 'number';
  steps.value = '10';
  steps.min = '1';
  steps.className = 'steps-input';

  const rate = document.createElement('input');
  rate.type = 'number';
  rate.value = '10';
  rate.min = '1';
  rate.className = 'rate-input';

  mk('pause', async () => {
    await client.setMode(sessionId, 'paused');
  });
  mk('step', async () => {
    await client.tick(sessionId, Math.max(1, Number(steps.value) || 1));
  });
  root.appendChild(steps);
  mk('run', async () => {
    await client.setMode(sessionId, 'realtime', Math.max(1, Number(rate.value) || 10));
  });
  root.appendChild(rate);
  const hz = document.createElement('span');
  hz.textContent = 'Hz';
  root.appendChild(hz);

  return { root };
}
