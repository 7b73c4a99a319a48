import { ApiClient, ApiError } from "./api.js";
import type { GenerateParams, ReviewStatus } from "./types.js";
import {
  casesHtml,
  errorBannerHtml,
  reviewBadge,
  reviewListHtml,
  statsHtml,
  taskDetailHtml,
  taskListHtml,
} from "./views.js";

const api = new ApiClient();
const app = document.getElementById("app") as HTMLElement;

function setActiveNav(route: string): void {
  document.querySelectorAll("nav a").forEach((a) => {
    a.classList.toggle("active", a.getAttribute("href") === `#${route}`);
  });
}

function showError(err: unknown): void {
  const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  app.innerHTML = errorBannerHtml(message);
  app.querySelector(".retry")?.addEventListener("click", () => void route());
}

async function renderTasks(): Promise<void> {
  app.innerHTML = taskListHtml(await api.tasks());
}

async function renderTaskDetail(name: string): Promise<void> {
  try {
    app.innerHTML = taskDetailHtml(await api.task(name));
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      app.innerHTML = `<p class="empty">task not found: ${name}</p>`;
      return;
    }
    throw err;
  }
}

function wireReviewForms(): void {
  app.querySelectorAll<HTMLFormElement>(".review-form").forEach((form) => {
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const card = form.closest<HTMLElement>(".case-card");
      const caseId = card?.dataset.caseId ?? "";
      const status = (form.elements.namedItem("status") as HTMLSelectElement).value;
      const note = (form.elements.namedItem("note") as HTMLInputElement).value;
      const errorSlot = form.querySelector(".review-error") as HTMLElement;
      if (!status) {
        errorSlot.textContent = "pick approve or flag first";
        return;
      }
      errorSlot.textContent = "";
      void api
        .review(caseId, status as ReviewStatus, note)
        .then((entry) => {
          const badge = card?.querySelector(".badge");
          if (badge) {
            badge.outerHTML = reviewBadge(entry.status);
          }
        })
        .catch((err) => {
          errorSlot.textContent = err instanceof ApiError ? err.message : String(err);
        });
    });
  });
}

async function generateAndRender(params: GenerateParams): Promise<void> {
  const gallery = document.getElementById("case-gallery") as HTMLElement;
  gallery.innerHTML = `<p class="empty">generating…</p>`;
  try {
    gallery.innerHTML = casesHtml(await api.generate(params));
    wireReviewForms();
  } catch (err) {
    gallery.innerHTML = errorBannerHtml(err instanceof ApiError ? err.message : String(err));
  }
}

function renderCasesPage(): void {
  app.innerHTML = `<form id="gen-form" class="gen-form">
  <label>seed <input name="seed" type="number" value="0" /></label>
  <label>count <input name="count" type="number" value="6" min="1" /></label>
  <label>rule ratio <input name="ratio" type="number" value="0.5" min="0" max="1" step="0.1" /></label>
  <label>task <input name="task" placeholder="(any)" /></label>
  <button type="submit">generate</button>
</form>
<div id="case-gallery"></div>`;
  const form = document.getElementById("gen-form") as HTMLFormElement;
  const submit = () => {
    const seed = Number((form.elements.namedItem("seed") as HTMLInputElement).value);
    const count = Number((form.elements.namedItem("count") as HTMLInputElement).value);
    const ratio = Number((form.elements.namedItem("ratio") as HTMLInputElement).value);
    const task = (form.elements.namedItem("task") as HTMLInputElement).value.trim();
    const params: GenerateParams = { count, seed, add_rule_ratio: ratio };
    if (task) {
      params.task = task;
    }
    void generateAndRender(params);
  };
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    submit();
  });
  submit();
}

async function renderStats(): Promise<void> {
  app.innerHTML = statsHtml(await api.stats());
}

async function renderReviews(): Promise<void> {
  const flagged = await api.reviews("flagged");
  const all = await api.reviews();
  app.innerHTML = `<h2>flagged</h2>${reviewListHtml(flagged)}
<h2>all</h2>${reviewListHtml(all)}`;
}

async function route(): Promise<void> {
  const hash = window.location.hash || "#/tasks";
  const [, page = "tasks", arg] = hash.slice(1).split("/").map(decodeURIComponent);
  setActiveNav(`/${page}${arg ? `/${encodeURIComponent(arg)}` : ""}`);
  try {
    if (page === "tasks" && arg) {
      await renderTaskDetail(arg);
    } else if (page === "tasks") {
      await renderTasks();
    } else if (page === "cases") {
      renderCasesPage();
    } else if (page === "stats") {
      await renderStats();
    } else if (page === "reviews") {
      await renderReviews();
    } else {
      app.innerHTML = `<p class="empty">not found</p>`;
    }
  } catch (err) {
    showError(err);
  }
}

window.addEventListener("hashchange", () => void route());
void route();
