// Gesture simulator: drives a live session through the same HTTP endpoint
// a real gesture source uses. A "fail capture" action exercises the
// three-attempt rule.

import { Api, ApiError } from "./api.js";
import type { GestureKind } from "./types.js";

export interface SimulatorResult {
  outcome: string;
  speak_text: string;
  stage_index: number;
  error?: string;
}

export class GestureSimulator {
  constructor(
    private api: Api,
    private sessionId: string,
  ) {}

  async send(kind: GestureKind): Promise<SimulatorResult> {
    return this.submit(kind, true);
  }

  async failCapture(): Promise<SimulatorResult> {
    return this.submit(null, false);
  }

  private async submit(kind: GestureKind | null, captureOk: boolean): Promise<SimulatorResult> {
    try {
      return await this.api.submitGesture(this.sessionId, kind, captureOk);
    } catch (e) {
      if (e instanceof ApiError) {
        // server rejections are shown verbatim
        return { outcome: "Error", speak_text: "", stage_index: 0, error: e.message };
      }
      throw e;
    }
  }
}
