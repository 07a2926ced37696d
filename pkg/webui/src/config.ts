/** UI configuration: a single JSON blob injected at load time. */

export interface UiConfig {
  apiBase: string;
}

/** Read the injected config; same-origin API when absent. */
export function loadConfig(win: unknown = globalThis): UiConfig {
  const injected = (win as { __LITEXPLORE_CONFIG__?: { apiBase?: unknown } })
    .__LITEXPLORE_CONFIG__;
  const apiBase = injected && typeof injected.apiBase === "string" ? injected.apiBase : "";
  return { apiBase: apiBase.replace(/\/$/, "") };
}
