export type Rgb = [number, number, number]

/** One temperature message as streamed by the feedback service. */
export interface TemperatureMessage {
  period_index: number
  level: number
  color: Rgb
  phrase: string
  payload_hex: string
}

export interface ServiceState {
  current_message: TemperatureMessage | null
  overall_usage: number
  next_period_index: number
  sim_now_ms: number
}

export interface ServiceConfig {
  time_scale: number
  params: { level_count: number; sampling_period_s: number }
}

/** Cold-start pop-up background, used until the first message arrives. */
export const NEUTRAL_GRAY: Rgb = [158, 158, 158]

export function cssColor(color: Rgb): string {
  return `rgb(${color[0]}, ${color[1]}, ${color[2]})`
}
