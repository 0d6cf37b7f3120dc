// Snapshot stream subscription over server-sent events.
//
// Uses the browser EventSource when available and falls back to reading the
// fetch body stream (which also makes the client testable under node).

import type { Snapshot } from './types.js';

export interface StreamHandlers {
  onSnapshot: (snap: Snapshot) => void;
  onStateChange?: (state: 'connecting' | 'open' | 'retrying' | 'closed') => void;
}

export interface StreamHandle {
  close(): void;
}

const RETRY_MS = 1000;

export function parseSseChunk(buffer: string): { events: string[]; rest: string } {
  const events: string[] = [];
  let rest = buffer;
  for (;;) {
    const cut = rest.indexOf('\n\n');
    if (cut < 0) break;
    const block = rest.slice(0, cut);
    rest = rest.slice(cut + 2);
    for (const line of block.split('\n')) {
      if (line.startsWith('data: ')) {
        events.push(line.slice(6));
      }
    }
  }
  return { events, rest };
}

export function connectStream(base: string, sessionId: string, handlers: StreamHandlers): StreamHandle {
  const url = `${base}/sessions/${sessionId}/stream`;
  let closed = false;
  let source: EventSource | null = null;
  let abort: AbortController | null = null;

  const notify = (state: 'connecting' | 'open' | 'retrying' | 'closed') =>
    handlers.onStateChange?.(state);

  const useEventSource = typeof EventSource !== 'undefined';

  const startEventSource = () => {
    if (closed) return;
    notify('connecting');
    source = new EventSource(url);
    source.onopen = () => notify('open');
    source.onmessage = (ev) => handlers.onSnapshot(JSON.parse(ev.data));
    source.onerror = () => notify('retrying'); // EventSource retries on its own
  };

  const startFetchStream = async () => {
    while (!closed) {
      notify('connecting');
      try {
        abort = new AbortController();
        const resp = await fetch(url, { signal: abort.signal });
        if (!resp.ok || !resp.body) throw new Error(`stream failed: ${resp.status}`);
        notify('open');
        const reader = resp.body.getReader();
        const decoder = new TextDecoder();
        let buffer = '';
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          const { events, rest } = parseSseChunk(buffer);
          buffer = rest;
          for (const data of events) handlers.onSnapshot(JSON.parse(data));
        }
      } catch {
        /* fall through to retry */
      }
      if (!closed) {
        notify('retrying');
        await new Promise((r) => setTimeout(r, RETRY_MS));
      }
    }
  };

  if (useEventSource) startEventSource();
  else void startFetchStream();

  return {
    close() {
      closed = true;
      source?.close();
      abort?.abort();
      notify('closed');
    },
  };
}
