import type { FeedbackSource, UsageReporter } from './client.js'
import type { Rgb, TemperatureMessage } from './types.js'
import { NEUTRAL_GRAY, cssColor } from './types.js'

const ROWS = ['qwertyuiop', 'asdfghjkl', 'zxcvbnm']
export const POPUP_MS = 150

/**
 * The virtual keyboard. Typing is the primary act: each key press enters
 * its character and, as a side channel, shows a pop-up whose background is
 * the color of the current temperature message. New messages change nothing
 * on screen by themselves; only later pop-ups look different.
 */
export class KeyboardView {
  readonly textArea: HTMLTextAreaElement
  readonly popup: HTMLDivElement
  readonly readout: HTMLSpanElement
  readonly statusLine: HTMLSpanElement
  readonly timeScaleLabel: HTMLSpanElement
  readonly coloringToggle: HTMLInputElement
  readonly readoutToggle: HTMLInputElement
  readonly resetButton: HTMLButtonElement

  private currentColor: Rgb = NEUTRAL_GRAY
  private currentMessage: TemperatureMessage | null = null
  private popupTimer: ReturnType<typeof setTimeout> | null = null
  private unsubscribe: (() => void) | null = null

  constructor(
    private readonly root: HTMLElement,
    private readonly source: FeedbackSource,
    private readonly reporter: UsageReporter,
    private readonly popupMs: number = POPUP_MS,
  ) {
    this.root.classList.add('heatkbd')
    const panel = el('div', 'panel')
    this.resetButton = el('button', 'reset')
    this.resetButton.textContent = 'reset'
    this.resetButton.addEventListener('click', () => void this.reporter.reset())
    this.timeScaleLabel = el('span', 'time-scale')
    this.statusLine = el('span', 'status')
    this.readout = el('span', 'readout')
    this.readout.hidden = true
    this.coloringToggle = toggle(panel, 'coloring', true)
    this.readoutToggle = toggle(panel, 'readout', false)
    this.readoutToggle.addEventListener('change', () => {
      this.readout.hidden = !this.readoutToggle.checked
    })
    panel.append(this.resetButton, this.timeScaleLabel, this.statusLine, this.readout)
    this.root.append(panel)

    this.textArea = el('textarea', 'text')
    this.textArea.rows = 3
    this.root.append(this.textArea)

    const keys = el('div', 'keys')
    for (const row of ROWS) {
      const rowEl = el('div', 'row')
      for (const ch of row) {
        rowEl.append(this.makeKey(ch, ch))
      }
      keys.append(rowEl)
    }
    const lastRow = el('div', 'row')
    lastRow.append(this.makeKey(' ', 'space'), this.makeKey('\b', '⌫'))
    keys.append(lastRow)
    this.root.append(keys)

    this.popup = el('div', 'popup')
    this.popup.hidden = true
    this.root.append(this.popup)

    this.unsubscribe = this.source.subscribe((message) => this.onMessage(message))
  }

  private makeKey(ch: string, label: string): HTMLButtonElement {
    const key = el('button', 'key')
    key.textContent = label
    key.dataset.key = ch
    key.addEventListener('click', () => this.press(ch))
    return key
  }

  /** The color pop-ups use right now (neutral while coloring is off). */
  popupColor(): Rgb {
    return this.coloringToggle.checked ? this.currentColor : NEUTRAL_GRAY
  }

  press(ch: string): void {
    if (ch === '\b') {
      this.textArea.value = this.textArea.value.slice(0, -1)
    } else {
      this.textArea.value += ch
    }
    this.showPopup(ch === '\b' ? '⌫' : ch === ' ' ? '␣' : ch)
    this.reporter.keypress()
  }

  private showPopup(label: string): void {
    this.popup.textContent = label
    this.popup.style.backgroundColor = cssColor(this.popupColor())
    this.popup.hidden = false
    if (this.popupTimer !== null) {
      clearTimeout(this.popupTimer)
    }
    this.popupTimer = setTimeout(() => {
      this.popup.hidden = true
      this.popupTimer = null
    }, this.popupMs)
  }

  /** New current message: remembered for later pop-ups, nothing repainted. */
  onMessage(message: TemperatureMessage): void {
    this.currentMessage = message
    this.currentColor = message.color
    this.readout.textContent = `level ${message.level} — ${message.phrase}`
  }

  message(): TemperatureMessage | null {
    return this.currentMessage
  }

  /** Pull /state into the status line (the engine runs either way). */
  async refreshState(): Promise<void> {
    const state = await this.reporter.state()
    this.statusLine.textContent =
      `period ${state.next_period_index} · usage ${state.overall_usage.toFixed(3)}`
  }

  async showTimeScale(): Promise<void> {
    const config = await this.reporter.config()
    this.timeScaleLabel.textContent = `time ×${config.time_scale}`
  }

  dispose(): void {
    this.unsubscribe?.()
    this.unsubscribe = null
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag)
  node.className = className
  return node
}

function toggle(parent: HTMLElement, name: string, checked: boolean): HTMLInputElement {
  const label = el('label', `toggle toggle-${name}`)
  const input = el('input', '')
  input.type = 'checkbox'
  input.checked = checked
  label.append(input, document.createTextNode(` ${name}`))
  parent.append(label)
  return input
}
