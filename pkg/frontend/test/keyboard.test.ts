import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest'

import type { FeedbackSource, UsageReporter } from '../src/client.js'
import { KeyboardView } from '../src/keyboard.js'
import type { Rgb, ServiceState, TemperatureMessage } from '../src/types.js'
import { cssColor, NEUTRAL_GRAY } from '../src/types.js'

// The service's default five-level palette, as far as this test needs it.
// The UI itself never holds a palette: colors arrive inside messages.
const PALETTE: Record<number, Rgb> = {
  0: [158, 158, 158],
  2: [229, 115, 115],
  4: [183, 28, 28],
}

function message(level: number, period = 0): TemperatureMessage {
  return {
    period_index: period,
    level,
    color: PALETTE[level],
    phrase: `level ${level} of 5`,
    payload_hex: '',
  }
}

class ScriptedStream implements FeedbackSource {
  private listener: ((m: TemperatureMessage) => void) | null = null
  unsubscribed = false

  subscribe(onMessage: (m: TemperatureMessage) => void): () => void {
    this.listener = onMessage
    return () => {
      this.unsubscribed = true
    }
  }

  emit(m: TemperatureMessage): void {
    this.listener?.(m)
  }
}

class FakeReporter implements UsageReporter {
  keypresses = 0
  resets = 0
  nextPeriod = 0

  keypress(): void {
    this.keypresses += 1
  }

  async reset(): Promise<void> {
    this.resets += 1
  }

  async state(): Promise<ServiceState> {
    this.nextPeriod += 1 // the engine keeps running no matter what the UI shows
    return {
      current_message: null,
      overall_usage: 0.05 * this.nextPeriod,
      next_period_index: this.nextPeriod,
      sim_now_ms: this.nextPeriod * 1_800_000,
    }
  }

  async config() {
    return { time_scale: 60, params: { level_count: 5, sampling_period_s: 1800 } }
  }
}

describe('KeyboardView', () => {
  let root: HTMLElement
  let stream: ScriptedStream
  let reporter: FakeReporter
  let view: KeyboardView

  beforeEach(() => {
    vi.useFakeTimers()
    root = document.createElement('div')
    document.body.append(root)
    stream = new ScriptedStream()
    reporter = new FakeReporter()
    view = new KeyboardView(root, stream, reporter)
  })

  afterEach(() => {
    view.dispose()
    root.remove()
    vi.useRealTimers()
  })

  it('pop-ups are neutral gray before any message arrives', () => {
    view.press('a')
    expect(view.popup.hidden).toBe(false)
    expect(view.popup.style.backgroundColor).toBe(cssColor(NEUTRAL_GRAY))
  })

  it('pop-ups after each emission carry that message color (0 -> 2 -> 4)', () => {
    for (const level of [0, 2, 4]) {
      stream.emit(message(level))
      view.press('x')
      expect(view.popup.style.backgroundColor).toBe(cssColor(PALETTE[level]))
    }
  })

  it('a new message repaints nothing until the next keypress', () => {
    stream.emit(message(0))
    view.press('a')
    const before = view.popup.style.backgroundColor
    stream.emit(message(4))
    expect(view.popup.style.backgroundColor).toBe(before)
    view.press('b')
    expect(view.popup.style.backgroundColor).toBe(cssColor(PALETTE[4]))
  })

  it('typing edits the text area and reports every keypress', () => {
    for (const ch of 'hi there') {
      view.press(ch)
    }
    view.press('\b')
    expect(view.textArea.value).toBe('hi ther')
    expect(reporter.keypresses).toBe(9)
  })

  it('the pop-up disappears after its display duration', () => {
    view.press('q')
    expect(view.popup.hidden).toBe(false)
    vi.advanceTimersByTime(149)
    expect(view.popup.hidden).toBe(false)
    vi.advanceTimersByTime(1)
    expect(view.popup.hidden).toBe(true)
  })

  it('coloring toggled off: pop-ups neutral while /state keeps advancing', async () => {
    stream.emit(message(4))
    view.coloringToggle.checked = false

    view.press('a')
    expect(view.popup.style.backgroundColor).toBe(cssColor(NEUTRAL_GRAY))

    const seen: number[] = []
    for (let i = 0; i < 3; i++) {
      await view.refreshState()
      seen.push(reporter.nextPeriod)
    }
    expect(seen).toEqual([1, 2, 3])
    expect(view.statusLine.textContent).toContain('period 3')

    // messages still tracked, keypresses still reported
    stream.emit(message(2, 7))
    expect(view.message()?.period_index).toBe(7)
    view.press('b')
    expect(reporter.keypresses).toBe(2)

    view.coloringToggle.checked = true
    view.press('c')
    expect(view.popup.style.backgroundColor).toBe(cssColor(PALETTE[2]))
  })

  it('level/phrase readout is hidden by default and toggleable', () => {
    stream.emit(message(4))
    expect(view.readout.hidden).toBe(true)
    view.readoutToggle.checked = true
    view.readoutToggle.dispatchEvent(new Event('change'))
    expect(view.readout.hidden).toBe(false)
    expect(view.readout.textContent).toContain('level 4')
  })

  it('reset button posts a reset', () => {
    view.resetButton.click()
    expect(reporter.resets).toBe(1)
  })

  it('clicking a rendered key behaves like pressing it', () => {
    const key = root.querySelector<HTMLButtonElement>('button.key[data-key="q"]')
    expect(key).not.toBeNull()
    key!.click()
    expect(view.textArea.value).toBe('q')
    expect(reporter.keypresses).toBe(1)
  })

  it('time-scale display shows the service config', async () => {
    await view.showTimeScale()
    expect(view.timeScaleLabel.textContent).toBe('time ×60')
  })

  it('dispose unsubscribes from the stream', () => {
    view.dispose()
    expect(stream.unsubscribed).toBe(true)
  })
})
