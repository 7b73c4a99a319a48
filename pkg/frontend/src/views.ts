/** Pure HTML builders: every number shown comes verbatim from an API payload
 * (no client-side recomputation of targets or statistics). */

import type { CaseRecord, ReviewEntry, StatsPayload, TaskDetail, TaskSummary } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function reviewBadge(status: string): string {
  return `<span class="badge badge-${escapeHtml(status)}">${escapeHtml(status)}</span>`;
}

export function taskListHtml(tasks: TaskSummary[]): string {
  const cards = tasks
    .map(
      (t) => `<a class="card task-card" href="#/tasks/${encodeURIComponent(t.name)}">
  <h3>${escapeHtml(t.name)}</h3>
  <p><span class="tag">${escapeHtml(t.family)}</span> ${escapeHtml(t.category)}</p>
</a>`,
    )
    .join("\n");
  return `<div class="cards">${cards}</div>`;
}

export function taskDetailHtml(detail: TaskDetail): string {
  const head = `<h2>${escapeHtml(detail.name)}</h2>
<p><span class="tag">${escapeHtml(detail.family)}</span> ${escapeHtml(detail.category)}</p>`;
  if (detail.family === "equation") {
    const rows = detail.inputs
      .map(
        (i) => `<tr><td>${escapeHtml(i.name)}</td><td>${escapeHtml(i.label)}</td>
<td>${escapeHtml(i.kind)}</td><td>${i.range ? escapeHtml(`[${i.range[0]}, ${i.range[1]}]`) : "-"}</td>
<td>${i.options.length ? escapeHtml(i.options.map(([l, v]) => `${l}: ${v}`).join(", ")) : "-"}</td></tr>`,
      )
      .join("\n");
    return `${head}
<pre class="formula">${escapeHtml(detail.formula)}</pre>
<p class="explanation">${escapeHtml(detail.explanation)}</p>
<table><thead><tr><th>input</th><th>label</th><th>kind</th><th>range</th><th>options</th></tr></thead>
<tbody>${rows}</tbody></table>`;
  }
  return `${head}
<p>max score: <strong>${detail.max_score}</strong></p>
<pre class="criteria">${escapeHtml(detail.criteria)}</pre>`;
}

export function caseCardHtml(record: CaseRecord): string {
  return `<article class="card case-card" data-case-id="${escapeHtml(record.id)}">
<header>
  <code>${escapeHtml(record.id)}</code>
  <span class="tag">${escapeHtml(record.template_id)}</span>
  ${reviewBadge(record.review_status)}
</header>
<pre class="prompt">${escapeHtml(record.prompt)}</pre>
<p class="target">target: <strong>${escapeHtml(record.target)}</strong></p>
${record.review_note ? `<p class="note">note: ${escapeHtml(record.review_note)}</p>` : ""}
<form class="review-form">
  <select name="status">
    <option value="">review…</option>
    <option value="approved">approve</option>
    <option value="flagged">flag</option>
  </select>
  <input name="note" placeholder="note" />
  <button type="submit">save</button>
  <span class="review-error"></span>
</form>
</article>`;
}

export function casesHtml(records: CaseRecord[]): string {
  return records.map(caseCardHtml).join("\n");
}

function countRows(counts: Record<string, number>): string {
  return Object.entries(counts)
    .map(([key, value]) => `<tr><td>${escapeHtml(key)}</td><td>${value}</td></tr>`)
    .join("\n");
}

export function statsHtml(stats: StatsPayload): string {
  const familyRows = countRows(stats.catalog.families);
  const reviewRows = countRows(stats.reviews);
  const categoryBlocks = Object.entries(stats.catalog.categories)
    .map(
      ([family, counts]) => `<h3>${escapeHtml(family)} categories</h3>
<table><tbody>${countRows(counts)}</tbody></table>`,
    )
    .join("\n");
  const usageRows = countRows(stats.catalog.indicator_usage);
  return `<h2>catalog</h2>
<table><tbody>${familyRows}
<tr><td>indicators</td><td>${stats.catalog.indicator_count}</td></tr></tbody></table>
${categoryBlocks}
<h3>indicator usage</h3>
<table><tbody>${usageRows}</tbody></table>
<h2>reviews</h2>
<table><tbody>${reviewRows}</tbody></table>`;
}

export function reviewListHtml(entries: ReviewEntry[]): string {
  if (!entries.length) {
    return `<p class="empty">no review entries</p>`;
  }
  const rows = entries
    .map(
      (e) => `<tr><td><code>${escapeHtml(e.case_id)}</code></td><td>${reviewBadge(e.status)}</td>
<td>${escapeHtml(e.note)}</td><td>${escapeHtml(e.timestamp)}</td></tr>`,
    )
    .join("\n");
  return `<table><thead><tr><th>case</th><th>status</th><th>note</th><th>when</th></tr></thead>
<tbody>${rows}</tbody></table>`;
}

export function errorBannerHtml(message: string): string {
  return `<div class="banner error">
  <strong>service unreachable:</strong> ${escapeHtml(message)}
  <button class="retry">retry</button>
</div>`;
}
