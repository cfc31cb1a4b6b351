// Pure ViewState -> HTML. No API calls, no globals, no date/random reads.

import type { FeatureTheta, Recommendation } from "./api";
import type { ViewState } from "./state";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

function featureBar(row: FeatureTheta, maxTheta: number): string {
  const width = maxTheta > 0 ? Math.max(1, Math.round((row.theta / maxTheta) * 100)) : 0;
  return (
    `<li class="feature-row"><span class="feature-name">${escapeHtml(row.feature)}</span>` +
    `<span class="bar" style="width:${width}%"></span>` +
    `<span class="theta">${row.theta.toFixed(4)}</span></li>`
  );
}

function recommendationItem(rec: Recommendation): string {
  const matched = rec.matched_features
    .map((m) => `<span class="match">${escapeHtml(m.feature)}</span>`)
    .join(" ");
  return (
    `<li class="rec-row" data-action="click-university" data-name="${escapeHtml(rec.name)}">` +
    `<span class="rec-name">${escapeHtml(rec.name)}</span>` +
    `<span class="rec-score">${rec.score.toFixed(4)}</span>${matched}</li>`
  );
}

function renderPanel(state: ViewState): string {
  if (!state.panel) return `<p class="empty">no recommendations yet</p>`;
  if (state.panel.kind === "flat") {
    if (state.panel.items.length === 0) return `<p class="empty">no recommendations yet</p>`;
    return `<ol class="recommendations">${state.panel.items.map(recommendationItem).join("")}</ol>`;
  }
  const sections = Object.entries(state.panel.buckets)
    .filter(([, items]) => items.length > 0)
    .map(
      ([label, items]) =>
        `<section class="rec-class"><h4>${escapeHtml(label)}</h4>` +
        `<ol class="recommendations">${items.map(recommendationItem).join("")}</ol></section>`,
    );
  return sections.join("") || `<p class="empty">no recommendations yet</p>`;
}

function renderResults(state: ViewState): string {
  if (state.results.length === 0) return `<p class="empty">no results</p>`;
  const rows = state.results
    .map(
      (row) =>
        `<li class="result-row" data-action="click-university" data-name="${escapeHtml(row.name)}">` +
        `${escapeHtml(row.name)} <span class="count">${row.match_count}</span></li>`,
    )
    .join("");
  return `<ul class="results">${rows}</ul>`;
}

function renderProfile(state: ViewState): string {
  if (!state.profile) return `<p class="empty">no profile</p>`;
  const top = state.profile.top_features;
  const maxTheta = top.length > 0 ? top[0]!.theta : 0;
  return (
    `<p class="profile-meta">events: ${state.profile.event_count}</p>` +
    `<ul class="features">${top.map((row) => featureBar(row, maxTheta)).join("")}</ul>`
  );
}

function renderDetail(state: ViewState): string {
  if (!state.detail) return "";
  const rows = Object.entries(state.detail.values)
    .filter(([, value]) => value !== null)
    .map(
      ([key, value]) =>
        `<tr><th>${escapeHtml(key)}</th><td>${escapeHtml(String(value))}</td></tr>`,
    )
    .join("");
  return (
    `<section class="detail"><h3>${escapeHtml(state.detail.name)}</h3>` +
    `<table>${rows}</table></section>`
  );
}

export function render(state: ViewState): string {
  const user = state.userId
    ? `<span class="user" data-testid="current-user">${escapeHtml(state.userId)}</span>`
    : `<form data-action="create-user"><input name="user_id" placeholder="new user id" />` +
      `<button type="submit">create user</button></form>`;
  const error = state.error
    ? `<div class="error" role="alert">${escapeHtml(state.error)}</div>`
    : "";
  const toggle =
    `<label>group by <select data-action="class-toggle">` +
    `<option value=""${state.classAttribute === null ? " selected" : ""}>ranking</option>` +
    ["location", "control", "expenses"]
      .map(
        (attr) =>
          `<option value="${attr}"${state.classAttribute === attr ? " selected" : ""}>${attr}</option>`,
      )
      .join("") +
    `</select></label>`;
  return (
    `<header>${user}${state.busy > 0 ? `<span class="busy">…</span>` : ""}</header>` +
    error +
    `<form data-action="search"><input name="q" value="${escapeHtml(state.query)}" ` +
    `placeholder="search universities" /><button type="submit">search</button></form>` +
    `<main><section class="pane" data-testid="results">${renderResults(state)}</section>` +
    `<section class="pane" data-testid="recommendations"><h2>recommendations</h2>${toggle}` +
    `${renderPanel(state)}</section>` +
    `<section class="pane" data-testid="profile"><h2>interest profile</h2>${renderProfile(state)}</section>` +
    `</main>` +
    renderDetail(state)
  );
}
