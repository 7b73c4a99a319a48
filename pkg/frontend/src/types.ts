/** Payload shapes of the /v1 API. */

export interface TaskSummary {
  name: string;
  family: "equation" | "scale";
  category: string;
}

export interface IndicatorView {
  name: string;
  label: string;
  kind: string;
  range: [number, number] | null;
  precision: number | null;
  unit: string;
  options: [string, number][];
}

export interface EquationDetail {
  name: string;
  family: "equation";
  category: string;
  formula: string;
  explanation: string;
  result: string;
  precision: number | null;
  inputs: IndicatorView[];
}

export interface ScaleItemView {
  title: string;
  mode: "single" | "multi";
  options: [string, number][];
}

export interface ScaleDetail {
  name: string;
  family: "scale";
  category: string;
  criteria: string;
  max_score: number;
  items: ScaleItemView[];
}

export type TaskDetail = EquationDetail | ScaleDetail;

export interface CaseRecord {
  id: string;
  family: "equation" | "scale";
  task_name: string;
  inputs: string[];
  add_rule: boolean;
  target: string;
  precision: number | null;
  seed: number;
  attempt_count: number;
  prompt: string;
  template_id: string;
  created_at: string | null;
  review_status: ReviewStatus;
  review_note: string;
}

export type ReviewStatus = "unreviewed" | "approved" | "flagged";

export interface ReviewEntry {
  case_id: string;
  status: ReviewStatus;
  note: string;
  reviewer: string;
  timestamp: string;
}

export interface StatsPayload {
  catalog: {
    families: Record<string, number>;
    categories: Record<string, Record<string, number>>;
    indicator_count: number;
    indicator_usage: Record<string, number>;
  };
  reviews: Record<string, number>;
}

export interface GenerateParams {
  count: number;
  seed?: number;
  task?: string;
  family?: "equation" | "scale";
  add_rule_ratio?: number;
}
