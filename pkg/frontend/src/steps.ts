// Replay of recorded trace steps. The client applies step records the
// server produced; it never generates them.

import type { BattleResultDoc, CompactStep } from "./protocol.js";

export function applyStep(values: number[], step: CompactStep): void {
  if (step[0] === "s") {
    const [, i, j] = step;
    const tmp = values[i]!;
    values[i] = values[j]!;
    values[j] = tmp;
  } else if (step[0] === "w") {
    values[step[1]] = step[2];
  }
  // compares and highlights do not touch data
}

export function arrayAt(initial: number[], steps: CompactStep[], position: number): number[] {
  const values = initial.slice();
  for (let k = 0; k < position; k++) {
    applyStep(values, steps[k]!);
  }
  return values;
}

export function stepLine(step: CompactStep): number {
  return step[step.length - 1] as number;
}

/** Pseudo-code line to highlight: the step the cursor is about to run,
 * or the last executed one at the end of the trace. */
export function highlightedLine(steps: CompactStep[], position: number): number | null {
  if (steps.length === 0) return null;
  const step = position < steps.length ? steps[position]! : steps[steps.length - 1]!;
  return stepLine(step);
}

export function describeStep(step: CompactStep): string {
  switch (step[0]) {
    case "c": {
      const word = step[3] === "G" ? ">" : step[3] === "L" ? "<" : "=";
      return `compare: A[${step[1]}] ${word} A[${step[2]}]`;
    }
    case "s":
      return `swap A[${step[1]}] and A[${step[2]}]`;
    case "w":
      return `write ${step[2]} at A[${step[1]}] (was ${step[3]})`;
    case "h":
      return `working on A[${step[1]}..${step[2]})`;
  }
}

/** Stripe shown at each position; the identity mapping reassembles the image. */
export function stripeMapping(values: number[]): number[] {
  return values.map((v) => v - 1);
}

/** Per-side step counts revealed by the first `position` timeline entries. */
export function revealedSteps(
  result: BattleResultDoc,
  position: number,
): { left: number; right: number } {
  let left = 0;
  let right = 0;
  const upto = Math.min(position, result.timeline.length);
  for (let k = 0; k < upto; k++) {
    if (result.timeline[k]![0] === "left") left++;
    else right++;
  }
  return { left, right };
}

export function raceArrays(
  result: BattleResultDoc,
  position: number,
): { left: number[]; right: number[] } {
  const counts = revealedSteps(result, position);
  return {
    left: arrayAt(result.input, result.left_steps, counts.left),
    right: arrayAt(result.input, result.right_steps, counts.right),
  };
}

/** Cumulative cost spent by each side after `position` timeline entries. */
export function raceCosts(
  result: BattleResultDoc,
  position: number,
): { left: number; right: number } {
  let left = 0;
  let right = 0;
  const upto = Math.min(position, result.timeline.length);
  for (let k = 0; k < upto; k++) {
    const entry = result.timeline[k]!;
    if (entry[0] === "left") left = entry[2];
    else right = entry[2];
  }
  return { left, right };
}
