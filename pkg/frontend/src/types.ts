// Wire types mirroring the nav-service JSON schemas.

export interface RobotPose {
  x: number;
  y: number;
  heading: number;
  v: number;
  omega: number;
  radius: number;
}

export interface WorldObjectView {
  id: string;
  label: string;
  x: number;
  y: number;
  radius: number;
  moving: boolean;
}

export interface GoalView {
  location: string;
  position: [number, number];
  score: number;
}

export interface DiskView {
  id: string;
  x: number;
  y: number;
  radius: number;
  noun: string;
  moving: boolean;
  last_seen: number;
}

export interface CostmapView {
  origin: [number, number];
  resolution: number;
  width: number;
  height: number;
  costs: number[][];
}

export interface PhraseView {
  surface: string;
  label: 'goal' | 'constraint' | 'uninformative';
  probs: number[];
  attention: number[] | null;
  nouns: string[];
  error: string | null;
}

export interface ParseView {
  text: string;
  timestamp: number;
  applied: boolean;
  error: string | null;
  goal_noun: string | null;
  constraint_nouns: string[];
  goal: GoalView | null;
  phrases: PhraseView[];
}

export interface MetricsView {
  length: number;
  duration: number;
  min_clearance: Record<string, number>;
}

export interface Snapshot {
  schema: string;
  session: string;
  tick: number;
  t: number;
  mode: string;
  status: string;
  robot: RobotPose;
  objects: WorldObjectView[];
  goal: GoalView | null;
  constraint_nouns: string[];
  disks: DiskView[];
  global_path: [number, number][] | null;
  local_path: [number, number][] | null;
  last_instruction: ParseView | null;
  metrics: MetricsView;
  costmap: CostmapView | null;
}

export interface StaticMap {
  name: string;
  resolution: number;
  origin: [number, number];
  width: number;
  height: number;
  grid: string[];
  locations: { name: string; position: [number, number] }[];
  start: { position: [number, number]; heading: number };
}

export type LayerName =
  | 'grid'
  | 'costmap'
  | 'disks'
  | 'globalPath'
  | 'localPath'
  | 'trajectory'
  | 'detections';
