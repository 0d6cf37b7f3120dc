// Layered 2D canvas renderer for the simulation view.

import type { Snapshot, StaticMap } from './types.js';
import type { ViewModel } from './viewmodel.js';

const COLORS = {
  background: '#11151c',
  wall: '#4a5568',
  unknown: '#2a2f3a',
  location: '#8bd5ff',
  goal: '#ffd166',
  globalPath: '#3fa7ff',
  localPath: '#7CFC9B',
  trajectory: '#f2f2f2',
  disk: '#ff5d73',
  robot: '#ffd166',
  person: '#ff9f68',
  object: '#9aa5b1',
  detection: '#7CFC9B',
};

export class SceneRenderer {
  private ctx: CanvasRenderingContext2D;

  constructor(private canvas: HTMLCanvasElement, private vm: ViewModel) {
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('canvas 2d context unavailable');
    this.ctx = ctx;
  }

  private toScreen(wx: number, wy: number): [number, number] {
    return this.vm.worldToScreen(wx, wy, this.canvas.width, this.canvas.height);
  }

  draw(): void {
    const { ctx, canvas, vm } = this;
    ctx.fillStyle = COLORS.background;
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    const map = vm.staticMap;
    const snap = vm.snapshot;
    if (map && vm.layers.grid) this.drawGrid(map);
    if (snap) {
      if (snap.costmap && vm.layers.costmap) this.drawCostmap(snap);
      if (map && vm.layers.grid) this.drawLocations(map);
      if (vm.layers.globalPath && snap.global_path) this.drawPath(snap.global_path, COLORS.globalPath, 2);
      if (vm.layers.localPath && snap.local_path) this.drawPath(snap.local_path, COLORS.localPath, 1.5);
      if (vm.layers.trajectory) this.drawPath(vm.trajectory, COLORS.trajectory, 1, 0.6);
      if (vm.layers.disks) this.drawDisks(snap);
      this.drawObjects(snap);
      if (vm.layers.detections) this.drawDetections(snap);
      this.drawGoal(snap);
      this.drawRobot(snap);
    }
  }

  private drawGrid(map: StaticMap): void {
    const { ctx } = this;
    const cell = map.resolution * this.vm.camera.scale;
    for (let row = 0; row < map.grid.length; row++) {
      const line = map.grid[row];
      const wy = map.origin[1] + (map.height - row) * map.resolution;
      for (let col = 0; col < line.length; col++) {
        const ch = line[col];
        if (ch === '.') continue;
        const wx = map.origin[0] + col * map.resolution;
        const [sx, sy] = this.toScreen(wx, wy);
        ctx.fillStyle = ch === '#' ? COLORS.wall : COLORS.unknown;
        ctx.fillRect(sx, sy, cell + 0.5, cell + 0.5);
      }
    }
  }

  private drawLocations(map: StaticMap): void {
    const { ctx } = this;
    ctx.font = '12px system-ui, sans-serif';
    for (const loc of map.locations) {
      const [sx, sy] = this.toScreen(loc.position[0], loc.position[1]);
      ctx.fillStyle = COLORS.location;
      ctx.beginPath();
      ctx.arc(sx, sy, 3, 0, Math.PI * 2);
      ctx.fill();
      ctx.fillText(loc.name, sx + 6, sy - 4);
    }
  }

  private drawCostmap(snap: Snapshot): void {
    const cm = snap.costmap;
    if (!cm) return;
    const { ctx } = this;
    const cell = cm.resolution * this.vm.camera.scale;
    for (let iy = 0; iy < cm.height; iy++) {
      for (let ix = 0; ix < cm.width; ix++) {
        const cost = cm.costs[iy][ix];
        if (cost === 0) continue;
        const wx = cm.origin[0] + ix * cm.resolution;
        const wy = cm.origin[1] + (iy + 1) * cm.resolution;
        const [sx, sy] = this.toScreen(wx, wy);
        const heat = Math.min(1, cost / 255);
        ctx.fillStyle = `rgba(255, ${Math.round(140 - 110 * heat)}, 60, ${0.08 + 0.35 * heat})`;
        ctx.fillRect(sx, sy, cell + 0.5, cell + 0.5);
      }
    }
  }

  private drawPath(points: [number, number][], color: string, width: number, alpha = 1): void {
    if (points.length < 2) return;
    const { ctx } = this;
    ctx.save();
    ctx.globalAlpha = alpha;
    ctx.strokeStyle = color;
    ctx.lineWidth = width;
    ctx.beginPath();
    const [sx0, sy0] = this.toScreen(points[0][0], points[0][1]);
    ctx.moveTo(sx0, sy0);
    for (const [wx, wy] of points.slice(1)) {
      const [sx, sy] = this.toScreen(wx, wy);
      ctx.lineTo(sx, sy);
    }
    ctx.stroke();
    ctx.restore();
  }

  private drawDisks(snap: Snapshot): void {
    const { ctx } = this;
    ctx.font = '11px system-ui, sans-serif';
    for (const disk of snap.disks) {
      const [sx, sy] = this.toScreen(disk.x, disk.y);
      ctx.strokeStyle = COLORS.disk;
      ctx.lineWidth = 1.5;
      ctx.setLineDash(disk.moving ? [4, 3] : []);
      ctx.beginPath();
      ctx.arc(sx, sy, disk.radius * this.vm.camera.scale, 0, Math.PI * 2);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = COLORS.disk;
      ctx.fillText(disk.noun, sx + 4, sy - 4);
    }
  }

  private drawObjects(snap: Snapshot): void {
    const { ctx } = this;
    for (const obj of snap.objects) {
      const [sx, sy] = this.toScreen(obj.x, obj.y);
      ctx.fillStyle = obj.label === 'person' ? COLORS.person : COLORS.object;
      ctx.beginPath();
      ctx.arc(sx, sy, Math.max(2.5, obj.radius * this.vm.camera.scale), 0, Math.PI * 2);
      ctx.fill();
    }
  }

  private drawDetections(snap: Snapshot): void {
    // Sight lines to any object currently covered by a fresh disk sighting.
    const { ctx } = this;
    const seen = new Set(snap.disks.filter((d) => d.last_seen >= snap.t - 0.2).map((d) => d.id));
    ctx.strokeStyle = COLORS.detection;
    ctx.lineWidth = 0.8;
    ctx.setLineDash([2, 4]);
    const [rx, ry] = this.toScreen(snap.robot.x, snap.robot.y);
    for (const obj of snap.objects) {
      if (!seen.has(obj.id)) continue;
      const [sx, sy] = this.toScreen(obj.x, obj.y);
      ctx.beginPath();
      ctx.moveTo(rx, ry);
      ctx.lineTo(sx, sy);
      ctx.stroke();
    }
    ctx.setLineDash([]);
  }

  private drawGoal(snap: Snapshot): void {
    if (!snap.goal) return;
    const { ctx } = this;
    const [sx, sy] = this.toScreen(snap.goal.position[0], snap.goal.position[1]);
    ctx.strokeStyle = COLORS.goal;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(sx, sy, 7, 0, Math.PI * 2);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(sx - 10, sy);
    ctx.lineTo(sx + 10, sy);
    ctx.moveTo(sx, sy - 10);
    ctx.lineTo(sx, sy + 10);
    ctx.stroke();
  }

  private drawRobot(snap: Snapshot): void {
    const { ctx } = this;
    const r = snap.robot;
    const [sx, sy] = this.toScreen(r.x, r.y);
    const s = Math.max(5, r.radius * this.vm.camera.scale);
    ctx.save();
    ctx.translate(sx, sy);
    ctx.rotate(-r.heading);
    ctx.fillStyle = COLORS.robot;
    ctx.beginPath();
    ctx.moveTo(s, 0);
    ctx.lineTo(-s * 0.7, s * 0.6);
    ctx.lineTo(-s * 0.7, -s * 0.6);
    ctx.closePath();
    ctx.fill();
    ctx.restore();
  }
}
