// Console entry point: create/attach a session and wire view, stream, panels.

import { NavClient } from './api.js';
import { buildControls, renderParse, renderStatus } from './panels.js';
import { SceneRenderer } from './render.js';
import { connectStream, StreamHandle } from './stream.js';
import type { LayerName } from './types.js';
import { ViewModel } from './viewmodel.js';

const LAYER_LABELS: [LayerName, string][] = [
  ['grid', 'grid'],
  ['costmap', 'costmap'],
  ['disks', 'disks'],
  ['globalPath', 'global path'],
  ['localPath', 'local path'],
  ['trajectory', 'trajectory'],
  ['detections', 'detections'],
];

async function boot(): Promise<void> {
  const client = new NavClient('');
  const vm = new ViewModel();

  const canvas = document.getElementById('scene') as HTMLCanvasElement;
  const banner = document.getElementById('banner')!;
  const parseBox = document.getElementById('parse')!;
  const statusBar = document.getElementById('status')!;
  const layerBox = document.getElementById('layers')!;
  const controlsBox = document.getElementById('controls')!;
  const form = document.getElementById('instruction-form') as HTMLFormElement;
  const input = document.getElementById('instruction') as HTMLInputElement;
  const send = document.getElementById('send') as HTMLButtonElement;

  const renderer = new SceneRenderer(canvas, vm);
  let framePending = false;
  vm.onChange(() => {
    if (framePending) return;
    framePending = true;
    requestAnimationFrame(() => {
      framePending = false;
      renderer.draw();
      if (vm.snapshot) renderStatus(statusBar, vm.snapshot);
    });
  });

  const params = new URLSearchParams(location.search);
  let sessionId = params.get('session');
  if (!sessionId) {
    const assets = await client.listAssets();
    const mapId = params.get('map') ?? assets.maps[0];
    const modelId = params.get('model') ?? assets.models[0];
    const seed = Number(params.get('seed') ?? '7');
    sessionId = await client.createSession(mapId, modelId, seed);
    params.set('session', sessionId);
    history.replaceState(null, '', `?${params}`);
  }

  vm.setStaticMap(await client.getMap(sessionId));

  for (const [name, label] of LAYER_LABELS) {
    const wrap = document.createElement('label');
    const box = document.createElement('input');
    box.type = 'checkbox';
    box.checked = vm.layers[name];
    box.addEventListener('change', () => vm.toggleLayer(name, box.checked));
    wrap.appendChild(box);
    wrap.appendChild(document.createTextNode(label));
    layerBox.appendChild(wrap);
  }

  const showError = (msg: string) => {
    banner.textContent = msg;
    banner.classList.toggle('hidden', !msg);
  };

  controlsBox.appendChild(buildControls(client, sessionId, showError).root);

  const toggleSend = () => {
    send.disabled = input.value.trim().length === 0;
  };
  input.addEventListener('input', toggleSend);
  toggleSend();

  form.addEventListener('submit', (ev) => {
    ev.preventDefault();
    const text = input.value.trim();
    if (!text || !sessionId) return;
    client
      .sendInstruction(sessionId, text)
      .then((parse) => {
        renderParse(parseBox, parse);
        showError('');
      })
      .catch((e) => showError(String(e)));
  });

  let stream: StreamHandle | null = null;
  const subscribe = () => {
    stream?.close();
    stream = connectStream('', sessionId!, {
      onSnapshot: (snap) => {
        vm.apply(snap);
        if (snap.last_instruction) renderParse(parseBox, snap.last_instruction);
      },
      onStateChange: (state) => {
        if (state === 'open') showError('');
        else if (state === 'retrying') showError('connection lost, retrying…');
      },
    });
  };
  subscribe();

  // Pan with drag, zoom with wheel.
  let dragging = false;
  let last: [number, number] | null = null;
  canvas.addEventListener('mousedown', (ev) => {
    dragging = true;
    last = [ev.offsetX, ev.offsetY];
  });
  window.addEventListener('mouseup', () => {
    dragging = false;
    last = null;
  });
  canvas.addEventListener('mousemove', (ev) => {
    if (!dragging || !last) return;
    vm.pan(ev.offsetX - last[0], ev.offsetY - last[1]);
    last = [ev.offsetX, ev.offsetY];
  });
  canvas.addEventListener('wheel', (ev) => {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    vm.zoom(factor, {
      x: ev.offsetX - canvas.width / 2,
      y: ev.offsetY - canvas.height / 2,
    });
  });

  const resize = () => {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    renderer.draw();
  };
  window.addEventListener('resize', resize);
  resize();
}

boot().catch((e) => {
  const banner = document.getElementById('banner');
  if (banner) {
    banner.textContent = `failed to start: ${e}`;
    banner.classList.remove('hidden');
  }
});
