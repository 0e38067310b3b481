import init, { model_matrix, check_design, explore } from "./pkg/satdesign_web.js";

const $ = (id) => document.getElementById(id);
const k = () => Number($("k").value);

function el(tag, attrs = {}, ...children) {
  const node = document.createElement(tag);
  Object.assign(node, attrs);
  node.append(...children);
  return node;
}

function table(header, rows, cellClass = () => "") {
  const t = el("table");
  t.append(el("tr", {}, ...header.map((h) => el("th", {}, h))));
  for (const [label, cells] of rows) {
    t.append(el("tr", {}, el("th", {}, label), ...cells.map((c, j) => el("td", { className: cellClass(j) }, String(c)))));
  }
  return t;
}

function show(id, build) {
  const out = $(id);
  out.replaceChildren();
  try {
    out.append(...build());
  } catch (e) {
    out.append(el("p", { className: "error" }, String(e.message ?? e)));
  }
}

$("show-matrix").onclick = () =>
  show("matrix-out", () => {
    const m = JSON.parse(model_matrix(k()));
    const negligible = new Set($("negligible").value.split(/[ ,]+/));
    const rows = m.runs.map((r, i) => [r, m.entries[i].map((x) => (x > 0 ? "+" : "−"))]);
    return [table(["run", ...m.effects], rows, (j) => (negligible.has(m.effects[j]) ? "neg" : ""))];
  });

$("check").onclick = () =>
  show("check-out", () => {
    const { report: r, c_block } = JSON.parse(check_design(k(), $("negligible").value, $("deleted").value));
    const verdict = r.admissible
      ? el("span", { className: "good" }, "admissible")
      : el("span", { className: "bad" }, "not admissible");
    const eff = r.efficiency_ratio ? `, efficiency ${r.efficiency_ratio} (D-efficiency ${r.d_efficiency_decimal})` : "";
    return [
      el("p", {}, verdict, ` — |det C| = ${r.abs_det_C}, |det D| = ${r.abs_det_D}${eff}${r.optimal ? ", D-optimal" : ""}`),
      el("p", {}, `kept runs: ${r.kept.join(" ")}`),
      table(["deleted", ...r.negligible], r.deleted.map((run, i) => [run, c_block[i].map((x) => (x > 0 ? "+1" : "−1"))])),
    ];
  });

$("explore").onclick = () =>
  show("explore-out", () => {
    const e = JSON.parse(explore(k(), $("negligible").value));
    const rows = e.classes.map((c) => [String(c.class_rank), [c.abs_det_C, c.abs_det_D, c.count]]);
    rows.push(["—", ["0", "0", e.inadmissible]]);
    const parts = [
      el("p", {}, `${e.admissible} of ${e.total} deletion sets are admissible.`),
      table(["class", "|det C|", "|det D|", "sets"], rows),
    ];
    if (e.optimum) {
      parts.push(
        el("p", {}, `D-optimal (${e.optima_count} maximizers; first shown): delete ${e.optimum.deleted.join(" ")}`),
      );
      const use = el("button", {}, "Check this set");
      use.onclick = () => {
        $("deleted").value = e.optimum.deleted.join(",");
        $("check").click();
      };
      parts.push(use);
    }
    return parts;
  });

await init();
