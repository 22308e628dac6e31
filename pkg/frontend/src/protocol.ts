// Wire protocol types mirrored from docs/protocol.md. The client never
// invents this data: it renders exactly what the server sends.

export type Side = "left" | "right";
export type Winner = Side | "draw";
export type Outcome = "L" | "E" | "G";
export type Phase = "guessing" | "racing" | "finished";

export type CompactStep =
  | ["c", number, number, Outcome, number]
  | ["s", number, number, number]
  | ["w", number, number, number, number]
  | ["h", number, number, number];

export interface TraceDoc {
  algorithm: string;
  initial: number[];
  steps: CompactStep[];
  total_cost: number;
}

export interface ArrangementDoc {
  kind: "sorted" | "reversed" | "random";
  seed?: number;
}

export interface BattleConfigDoc {
  left: string;
  right: string;
  arrangement: ArrangementDoc;
  size: number;
}

export interface BattleResultDoc {
  config: BattleConfigDoc;
  input: number[];
  left_steps: CompactStep[];
  right_steps: CompactStep[];
  left_cost: number;
  right_cost: number;
  winner: Winner;
  timeline: [string, number, number][];
}

export interface AlgorithmInfo {
  id: string;
  display_name: string;
  description: string;
  pseudo_code: string[];
}

export type ViewDoc =
  | { kind: "lobby" }
  | { kind: "detail"; algorithm: string; initial: number[]; position: number }
  | {
      kind: "battle";
      config: BattleConfigDoc;
      phase: Phase;
      position: number;
      guesses: Record<string, Side>;
    };

export interface SnapshotDoc {
  room_id: string;
  members: [string, string, number][];
  controller: string | null;
  view: ViewDoc;
  log_seq: number;
  pending_control: string[];
  scoreboard: Record<string, number>;
  next_join_seq: number;
  derived?: { trace?: TraceDoc; input?: number[]; result?: BattleResultDoc };
}

export interface ActionDoc {
  seq: number;
  actor: string;
  body: Record<string, unknown> & { kind: string };
}

export type ServerMessage =
  | { type: "welcome"; v: number; user_id: string; snapshot: SnapshotDoc; catalog: AlgorithmInfo[] }
  | { type: "action_applied"; v: number; action: ActionDoc }
  | { type: "rejected"; v: number; reason: string; body: Record<string, unknown> }
  | { type: "control_requested"; v: number; by: string }
  | { type: "room_event"; v: number; event: "joined" | "left"; user_id: string; name: string }
  | { type: "score_update"; v: number; scoreboard: Record<string, number> }
  | { type: "pong"; v: number };

export function hello(name: string, room: string) {
  return { type: "hello", v: 1, name, room };
}

export function actionRequest(body: Record<string, unknown>) {
  return { type: "action", v: 1, body };
}

export function ping() {
  return { type: "ping", v: 1 };
}
