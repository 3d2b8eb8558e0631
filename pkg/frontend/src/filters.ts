import type { QueryPayload } from "./types.js";

export const COLOR_CHOICES = [
  "RED", "ORANGE", "YELLOW", "GREEN", "CYAN", "BLUE",
  "PURPLE", "MAGENTA", "BLACK", "WHITE", "GRAY", "NONE",
] as const;

export interface FilterPanelElements {
  thresholdSlider: HTMLInputElement;
  thresholdValue?: HTMLElement;
  colorPicker: HTMLSelectElement;
}

/**
 * Score-threshold slider plus dominant-color picker, mapped straight onto
 * the query payload's score_threshold / color_filter fields. A threshold
 * of 0 and the empty color choice mean "no filter".
 */
export class FilterPanel {
  constructor(private readonly els: FilterPanelElements) {
    els.thresholdSlider.min = "0";
    els.thresholdSlider.max = "1";
    els.thresholdSlider.step = "0.01";
    if (!els.thresholdSlider.value) els.thresholdSlider.value = "0";
    if (els.colorPicker.options.length === 0) {
      const none = document.createElement("option");
      none.value = "";
      none.textContent = "any color";
      els.colorPicker.appendChild(none);
      for (const color of COLOR_CHOICES) {
        const option = document.createElement("option");
        option.value = color;
        option.textContent = color.toLowerCase();
        els.colorPicker.appendChild(option);
      }
    }
    els.thresholdSlider.addEventListener("input", () => this.showValue());
    this.showValue();
  }

  private showValue(): void {
    if (this.els.thresholdValue) {
      this.els.thresholdValue.textContent = Number(this.els.thresholdSlider.value).toFixed(2);
    }
  }

  /** Fold the current panel state into a query payload. */
  apply(payload: QueryPayload): QueryPayload {
    const out = { ...payload };
    const threshold = Number(this.els.thresholdSlider.value);
    if (threshold > 0) out.score_threshold = threshold;
    else delete out.score_threshold;
    const color = this.els.colorPicker.value;
    if (color) out.color_filter = color;
    else delete out.color_filter;
    return out;
  }
}
