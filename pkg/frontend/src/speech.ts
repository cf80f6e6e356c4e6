// Spoken feedback with captions.
//
// Every text is always captioned; speech is best-effort through the
// browser's native synthesis and degrades silently to caption-only.

export interface UtteranceLike {
  text: string;
  onend: (() => void) | null;
}

export interface SynthLike {
  speak(utterance: UtteranceLike): void;
}

function nativeSynth(): SynthLike | null {
  if (typeof window !== "undefined" && "speechSynthesis" in window) {
    return {
      speak(u: UtteranceLike) {
        const utterance = new SpeechSynthesisUtterance(u.text);
        utterance.onend = () => u.onend?.();
        utterance.onerror = () => u.onend?.();
        window.speechSynthesis.speak(utterance);
      },
    };
  }
  return null;
}

export class SpeechQueue {
  readonly captions: string[] = [];
  private queue: string[] = [];
  private speaking = false;

  constructor(
    private onCaption: (text: string) => void = () => {},
    private synth: SynthLike | null | undefined = undefined,
  ) {
    if (this.synth === undefined) this.synth = nativeSynth();
  }

  enqueue(text: string): void {
    if (!text) return;
    this.captions.push(text);
    this.onCaption(text);
    if (!this.synth) return; // caption-only degradation
    this.queue.push(text);
    this.pump();
  }

  private pump(): void {
    if (this.speaking || this.queue.length === 0 || !this.synth) return;
    const text = this.queue.shift()!;
    this.speaking = true;
    const utterance: UtteranceLike = {
      text,
      onend: () => {
        this.speaking = false;
        this.pump();
      },
    };
    try {
      this.synth.speak(utterance);
    } catch {
      // synthesis failure: keep captions flowing
      this.speaking = false;
    }
  }
}
