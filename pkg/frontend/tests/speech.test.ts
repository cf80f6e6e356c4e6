import { describe, expect, it } from "vitest";

import { SpeechQueue, SynthLike, UtteranceLike } from "../src/speech.js";

class FakeSynth implements SynthLike {
  spoken: string[] = [];
  pending: UtteranceLike[] = [];

  speak(utterance: UtteranceLike): void {
    this.spoken.push(utterance.text);
    this.pending.push(utterance);
  }

  finishNext(): void {
    this.pending.shift()?.onend?.();
  }
}

describe("SpeechQueue", () => {
  it("captions everything immediately and in order", () => {
    const captions: string[] = [];
    const queue = new SpeechQueue((t) => captions.push(t), new FakeSynth());
    queue.enqueue("Stage 2: descent");
    queue.enqueue("Correct!");
    expect(captions).toEqual(["Stage 2: descent", "Correct!"]);
  });

  it("speaks one utterance at a time, in arrival order", () => {
    const synth = new FakeSynth();
    const queue = new SpeechQueue(() => {}, synth);
    queue.enqueue("one");
    queue.enqueue("two");
    queue.enqueue("three");
    expect(synth.spoken).toEqual(["one"]); // the rest wait for onend
    synth.finishNext();
    expect(synth.spoken).toEqual(["one", "two"]);
    synth.finishNext();
    expect(synth.spoken).toEqual(["one", "two", "three"]);
  });

  it("degrades to caption-only without speech synthesis", () => {
    const captions: string[] = [];
    const queue = new SpeechQueue((t) => captions.push(t), null);
    queue.enqueue("still captioned");
    expect(captions).toEqual(["still captioned"]);
  });

  it("ignores empty texts", () => {
    const synth = new FakeSynth();
    const queue = new SpeechQueue(() => {}, synth);
    queue.enqueue("");
    expect(synth.spoken).toEqual([]);
  });
});
