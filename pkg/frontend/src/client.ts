import type { ServiceConfig, ServiceState, TemperatureMessage } from './types.js'

/** Anything that can deliver the live message stream. */
export interface FeedbackSource {
  subscribe(onMessage: (message: TemperatureMessage) => void): () => void
}

/** Anything the keyboard can report activity to and query. */
export interface UsageReporter {
  keypress(): void
  reset(): Promise<void>
  state(): Promise<ServiceState>
  config(): Promise<ServiceConfig>
}

/**
 * HTTP client for the feedback service. The stream rides on EventSource and
 * reconnects after a short delay if the connection drops; keypress reports
 * are fire-and-forget.
 */
export class ServiceClient implements FeedbackSource, UsageReporter {
  constructor(private readonly baseUrl: string = '') {}

  subscribe(onMessage: (message: TemperatureMessage) => void): () => void {
    let source: EventSource | null = null
    let closed = false
    const connect = () => {
      source = new EventSource(`${this.baseUrl}/stream`)
      source.onmessage = (event) => {
        onMessage(JSON.parse(event.data) as TemperatureMessage)
      }
      source.onerror = () => {
        source?.close()
        if (!closed) {
          setTimeout(connect, 1500)
        }
      }
    }
    connect()
    return () => {
      closed = true
      source?.close()
    }
  }

  keypress(): void {
    void fetch(`${this.baseUrl}/keypress`, { method: 'POST' }).catch(() => {
      /* non-critical: a missed report only delays heating */
    })
  }

  async reset(): Promise<void> {
    await fetch(`${this.baseUrl}/reset`, { method: 'POST' })
  }

  async state(): Promise<ServiceState> {
    const response = await fetch(`${this.baseUrl}/state`)
    return (await response.json()) as ServiceState
  }

  async config(): Promise<ServiceConfig> {
    const response = await fetch(`${this.baseUrl}/config`)
    return (await response.json()) as ServiceConfig
  }
}
