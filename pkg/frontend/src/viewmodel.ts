// View state over the snapshot stream: latest snapshot, pan/zoom, layers.
//
// Renders only what snapshots contain; the one piece of accumulated state is
// the robot trajectory, rebuilt from the ticks seen so far.

import type { LayerName, Snapshot, StaticMap } from './types.js';

export interface Camera {
  // World-to-screen: screen = (world - center) * scale (+ y flip).
  centerX: number;
  centerY: number;
  scale: number; // pixels per meter
}

const ALL_LAYERS: LayerName[] = [
  'grid',
  'costmap',
  'disks',
  'globalPath',
  'localPath',
  'trajectory',
  'detections',
];

export class ViewModel {
  snapshot: Snapshot | null = null;
  staticMap: StaticMap | null = null;
  camera: Camera = { centerX: 0, centerY: 0, scale: 40 };
  layers: Record<LayerName, boolean>;
  trajectory: [number, number][] = [];
  renderCount = 0;
  dropped = 0;

  private listeners: (() => void)[] = [];

  constructor() {
    this.layers = Object.fromEntries(ALL_LAYERS.map((l) => [l, true])) as Record<
      LayerName,
      boolean
    >;
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    this.renderCount += 1;
    for (const l of this.listeners) l();
  }

  setStaticMap(map: StaticMap): void {
    this.staticMap = map;
    this.camera.centerX = map.origin[0] + (map.width * map.resolution) / 2;
    this.camera.centerY = map.origin[1] + (map.height * map.resolution) / 2;
    this.emit();
  }

  /** Apply a snapshot; stale (out-of-order) snapshots are ignored. */
  apply(snap: Snapshot): boolean {
    const prev = this.snapshot;
    if (prev && snap.session === prev.session && snap.tick < prev.tick) {
      this.dropped += 1;
      return false;
    }
    if (!prev || snap.session !== prev.session) {
      this.trajectory = [];
    }
    if (this.trajectory.length === 0 || !prev || snap.tick > prev.tick) {
      this.trajectory.push([snap.robot.x, snap.robot.y]);
    }
    this.snapshot = snap;
    this.emit();
    return true;
  }

  toggleLayer(name: LayerName, on?: boolean): void {
    this.layers[name] = on ?? !this.layers[name];
    this.emit();
  }

  pan(dxPixels: number, dyPixels: number): void {
    this.camera.centerX -= dxPixels / this.camera.scale;
    this.camera.centerY += dyPixels / this.camera.scale;
    this.emit();
  }

  zoom(factor: number, anchor?: { x: number; y: number }): void {
    const next = Math.min(400, Math.max(5, this.camera.scale * factor));
    if (anchor) {
      // Keep the world point under the anchor fixed while zooming.
      const wx = this.camera.centerX + anchor.x / this.camera.scale;
      const wy = this.camera.centerY - anchor.y / this.camera.scale;
      this.camera.centerX = wx - anchor.x / next;
      this.camera.centerY = wy + anchor.y / next;
    }
    this.camera.scale = next;
    this.emit();
  }

  worldToScreen(wx: number, wy: number, width: number, height: number): [number, number] {
    return [
      width / 2 + (wx - this.camera.centerX) * this.camera.scale,
      height / 2 - (wy - this.camera.centerY) * this.camera.scale,
    ];
  }

  screenToWorld(sx: number, sy: number, width: number, height: number): [number, number] {
    return [
      this.camera.centerX + (sx - width / 2) / this.camera.scale,
      this.camera.centerY - (sy - height / 2) / this.camera.scale,
    ];
  }
}
