import { ServiceClient } from './client.js'
import { KeyboardView } from './keyboard.js'

const STATE_POLL_MS = 2000

/** Wire the keyboard to the feedback service behind the page's origin. */
export function bootstrap(root: HTMLElement, baseUrl = ''): KeyboardView {
  const client = new ServiceClient(baseUrl)
  const view = new KeyboardView(root, client, client)
  void view.showTimeScale()
  setInterval(() => void view.refreshState(), STATE_POLL_MS)
  return view
}
