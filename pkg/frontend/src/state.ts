// Client-side room replica. The store holds no authoritative state:
// everything is rebuilt from the latest snapshot plus applied actions,
// so a refresh (new welcome) always lands on the same screen.

import type {
  ActionDoc,
  AlgorithmInfo,
  BattleConfigDoc,
  BattleResultDoc,
  ServerMessage,
  Side,
  SnapshotDoc,
  TraceDoc,
  Phase,
} from "./protocol.js";

export interface MemberEntry {
  userId: string;
  name: string;
  joinSeq: number;
}

export type ViewState =
  | { kind: "lobby" }
  | { kind: "detail"; algorithm: string; position: number; trace: TraceDoc | null }
  | {
      kind: "battle";
      config: BattleConfigDoc;
      phase: Phase;
      position: number;
      guesses: Record<string, Side>;
      input: number[];
      result: BattleResultDoc | null;
    };

export interface ClientState {
  userId: string | null;
  roomId: string | null;
  members: MemberEntry[];
  controller: string | null;
  pending: string[];
  view: ViewState;
  logSeq: number;
  nextJoinSeq: number;
  scoreboard: Record<string, number>;
  names: Record<string, string>; // includes departed members
  catalog: AlgorithmInfo[];
  notice: string | null;
  desynced: boolean;
}

export const initialState: ClientState = {
  userId: null,
  roomId: null,
  members: [],
  controller: null,
  pending: [],
  view: { kind: "lobby" },
  logSeq: 0,
  nextJoinSeq: 1,
  scoreboard: {},
  names: {},
  catalog: [],
  notice: null,
  desynced: false,
};

const REJECTION_TEXT: Record<string, string> = {
  not_controller: "You are not in control. Use “Request control”.",
  bad_phase: "Not possible in this phase. Guesses lock when the race starts.",
  already_requested: "Control already requested; waiting for the controller.",
  is_controller: "You already hold control.",
  room_full: "That room is full.",
  max_rooms: "The server will not host more rooms.",
  out_of_range: "Position out of range.",
  no_successor: "No one to release control to.",
};

export function rejectionText(reason: string, body: Record<string, unknown>): string {
  const base = REJECTION_TEXT[reason] ?? `Rejected: ${reason}`;
  const kind = typeof body?.kind === "string" ? body.kind : null;
  if (reason === "bad_phase" && kind === "submit_guess") {
    return "Guess rejected: the race has already started (guesses lock at start).";
  }
  return base;
}

function fromSnapshot(
  state: ClientState,
  userId: string,
  snapshot: SnapshotDoc,
  catalog: AlgorithmInfo[],
): ClientState {
  const members = snapshot.members.map(([id, name, joinSeq]) => ({
    userId: id,
    name,
    joinSeq,
  }));
  const names = { ...state.names };
  for (const member of members) names[member.userId] = member.name;

  let view: ViewState;
  const doc = snapshot.view;
  if (doc.kind === "detail") {
    view = {
      kind: "detail",
      algorithm: doc.algorithm,
      position: doc.position,
      trace: snapshot.derived?.trace ?? null,
    };
  } else if (doc.kind === "battle") {
    view = {
      kind: "battle",
      config: doc.config,
      phase: doc.phase,
      position: doc.position,
      guesses: { ...doc.guesses },
      input: snapshot.derived?.input ?? [],
      result: snapshot.derived?.result ?? null,
    };
  } else {
    view = { kind: "lobby" };
  }

  return {
    ...state,
    userId,
    roomId: snapshot.room_id,
    members,
    controller: snapshot.controller,
    pending: [...snapshot.pending_control],
    view,
    logSeq: snapshot.log_seq,
    nextJoinSeq: snapshot.next_join_seq,
    scoreboard: { ...snapshot.scoreboard },
    names,
    catalog,
    desynced: false,
  };
}

function applyAction(state: ClientState, action: ActionDoc): ClientState {
  const body = action.body;
  const actor = action.actor;
  const view = state.view;

  switch (body.kind) {
    case "join": {
      const name = String(body.name ?? actor);
      const member = { userId: actor, name, joinSeq: state.nextJoinSeq };
      return {
        ...state,
        members: [...state.members, member],
        controller: state.controller ?? actor,
        nextJoinSeq: state.nextJoinSeq + 1,
        names: { ...state.names, [actor]: name },
      };
    }
    case "leave": {
      const next: ClientState = {
        ...state,
        members: state.members.filter((m) => m.userId !== actor),
        pending: state.pending.filter((u) => u !== actor),
        controller: state.controller === actor ? null : state.controller,
      };
      if (view.kind === "battle" && actor in view.guesses) {
        const guesses = { ...view.guesses };
        delete guesses[actor];
        next.view = { ...view, guesses };
      }
      return next;
    }
    case "request_control":
      return { ...state, pending: [...state.pending, actor] };
    case "grant_control":
    case "release_control": {
      const to = String(body.to);
      return {
        ...state,
        controller: to,
        pending: state.pending.filter((u) => u !== to),
      };
    }
    case "enter_detail":
    case "select_algorithm": {
      const trace = (body.trace as TraceDoc | undefined) ?? null;
      return {
        ...state,
        view: {
          kind: "detail",
          algorithm: String(body.algorithm),
          position: 0,
          trace,
        },
      };
    }
    case "step_forward":
      if (view.kind !== "detail") return state;
      return { ...state, view: { ...view, position: view.position + 1 } };
    case "step_backward":
      if (view.kind !== "detail") return state;
      return { ...state, view: { ...view, position: view.position - 1 } };
    case "seek":
      if (view.kind !== "detail") return state;
      return { ...state, view: { ...view, position: Number(body.position) } };
    case "enter_battle":
      return {
        ...state,
        view: {
          kind: "battle",
          config: body.config as BattleConfigDoc,
          phase: "guessing",
          position: 0,
          guesses: {},
          input: (body.input as number[] | undefined) ?? [],
          result: null,
        },
      };
    case "submit_guess": {
      if (view.kind !== "battle") return state;
      const guesses = { ...view.guesses, [actor]: body.side as Side };
      return { ...state, view: { ...view, guesses } };
    }
    case "start_race": {
      if (view.kind !== "battle") return state;
      const result = (body.result as BattleResultDoc | undefined) ?? null;
      return { ...state, view: { ...view, phase: "racing", position: 0, result } };
    }
    case "advance_race": {
      if (view.kind !== "battle" || view.result === null) return state;
      const total = view.result.timeline.length;
      const position = Math.min(view.position + Number(body.ticks), total);
      const phase: Phase = position >= total ? "finished" : "racing";
      return { ...state, view: { ...view, position, phase } };
    }
    case "exit_to_lobby":
      return { ...state, view: { kind: "lobby" } };
    default:
      // unknown kinds are tolerated: the server may grow new actions
      return state;
  }
}

export function applyMessage(state: ClientState, msg: ServerMessage): ClientState {
  switch (msg.type) {
    case "welcome":
      return fromSnapshot(state, msg.user_id, msg.snapshot, msg.catalog);
    case "action_applied": {
      const seq = msg.action.seq;
      if (seq <= state.logSeq) return state; // already in the snapshot
      if (seq !== state.logSeq + 1) {
        return { ...state, desynced: true, notice: "Out of sync; rejoin the room." };
      }
      return applyAction({ ...state, logSeq: seq }, msg.action);
    }
    case "rejected":
      return { ...state, notice: rejectionText(msg.reason, msg.body) };
    case "control_requested":
      return {
        ...state,
        notice: `${state.names[msg.by] ?? msg.by} requests control.`,
      };
    case "room_event":
      return {
        ...state,
        names: { ...state.names, [msg.user_id]: msg.name },
      };
    case "score_update":
      return { ...state, scoreboard: { ...msg.scoreboard } };
    case "pong":
      return state;
  }
}

export function clearNotice(state: ClientState): ClientState {
  return state.notice === null ? state : { ...state, notice: null };
}

export function isController(state: ClientState): boolean {
  return state.userId !== null && state.userId === state.controller;
}

export function displayName(state: ClientState, userId: string): string {
  return state.names[userId] ?? userId;
}
