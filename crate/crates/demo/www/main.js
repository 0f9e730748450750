// ./pkg comes from `wasm-bindgen --target web --out-dir www/pkg` (see the README).
import init, { detection_curve, simulate, dialogue_transcript } from "./pkg/qdialogue_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function plot(canvas, series) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 10, width - pad - 10, height - pad - 10);
  const maxX = Math.max(...series.flatMap((s) => s.points.map((p) => p[0])));
  const x = (v) => pad + ((width - pad - 10) * (v - 1)) / Math.max(maxX - 1, 1);
  const y = (v) => height - pad - (height - pad - 20) * v;
  ctx.fillStyle = "#444";
  ctx.fillText("0", pad - 12, y(0) + 4);
  ctx.fillText("1", pad - 12, y(1) + 4);
  ctx.fillText("N = " + maxX, width - 60, height - 15);
  series.forEach((s, i) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.points.forEach(([px, py], j) => (j ? ctx.lineTo(x(px), y(py)) : ctx.moveTo(x(px), y(py))));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, pad + 10, 25 + 14 * i);
  });
}

function showCurve() {
  const curves = JSON.parse(detection_curve(num("curve-c"), num("curve-d"), num("curve-n"), num("curve-d")));
  plot($("curve-canvas"), [
    { label: "1-(1-cd)^(N/(1-c))", color: "#1f6fb2", points: curves.points.map((p) => [p.n, p.closed_form]) },
    { label: "terminal policy, exact", color: "#c2571a", points: curves.points.map((p) => [p.n, p.terminal_policy]) },
  ]);
  const s = curves.eve_entropy_bits;
  $("curve-note").textContent =
    s === null ? "" : `Reading d as a probe weight beta2, Eve's ancilla entropy is ${s.toFixed(6)} bits.`;
}

function fmt(v) {
  return typeof v === "number" ? v.toFixed(5) : String(v);
}

function showSimulation() {
  const doc = JSON.parse(
    simulate($("sim-attack").value, num("sim-beta2"), num("sim-c"), num("sim-n"), num("sim-trials"), num("sim-seed")),
  );
  const rows = doc.comparisons
    .map(
      (c) =>
        `<tr><td style="text-align:left">${c.name}</td><td>${fmt(c.empirical)}</td><td>${fmt(c.reference)}</td>` +
        `<td>${fmt(c.tolerance)}</td><td class="${c.pass ? "pass" : "fail"}">${c.pass ? "pass" : "FAIL"}</td></tr>`,
    )
    .join("");
  const s = doc.summary;
  $("sim-out").innerHTML =
    `<p>${s.trials} dialogues: ${s.completed} completed, ${s.detected} detected; ` +
    `${s.cm_runs} control runs, ${s.control_failures} failed.</p>` +
    `<table><tr><th>comparison</th><th>empirical</th><th>reference</th><th>tolerance</th><th></th></tr>${rows}</table>`;
}

function showTranscript() {
  const report = JSON.parse(
    dialogue_transcript($("sim-attack").value, num("sim-beta2"), num("sim-c"), num("sim-n"), num("sim-seed")),
  );
  const eve = new Map(report.eve.runs.map((r) => [r.run, r]));
  const pair = (p) => `(${p[0]},${p[1]})`;
  const lines = report.transcript.runs.map((r) => {
    const e = eve.get(r.index);
    const seen = e ? ` eve:${e.observation.kind}` : "";
    const verdict = r.cm_pass === null ? "" : r.cm_pass ? " check ok" : " CHECK FAILED";
    return `#${r.index} slot ${r.slot} ${r.mode} bob ${pair(r.bob_code)} alice ${pair(r.alice_code)} outcome ${pair(r.outcome)}${verdict}${seen}`;
  });
  lines.push(`status: ${report.transcript.status}`);
  $("tx-out").innerHTML = `<pre>${lines.join("\n")}</pre>`;
}

function guarded(fn) {
  return () => {
    try {
      $("status").textContent = "";
      fn();
    } catch (e) {
      $("status").textContent = String(e);
    }
  };
}

init().then(() => {
  $("status").textContent = "";
  $("curve-go").onclick = guarded(showCurve);
  $("sim-go").onclick = guarded(showSimulation);
  $("tx-go").onclick = guarded(showTranscript);
  guarded(showCurve)();
});
