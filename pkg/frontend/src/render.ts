import type { MapViewModel } from "./mapmodel.js";

/** Draw the schematic map: route line, stop pins, bus markers with their
 * seat counts. Pure canvas drawing; panning state lives on the model. */
export function drawMap(canvas: HTMLCanvasElement, map: MapViewModel): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#f4f1ea";
  ctx.fillRect(0, 0, width, height);

  const [src, dst] = map.routeLine;
  const a = map.project(src.lat, src.lon, width, height);
  const b = map.project(dst.lat, dst.lon, width, height);
  ctx.strokeStyle = "#4a6fa5";
  ctx.lineWidth = 3;
  ctx.setLineDash([8, 6]);
  ctx.beginPath();
  ctx.moveTo(a.x, a.y);
  ctx.lineTo(b.x, b.y);
  ctx.stroke();
  ctx.setLineDash([]);

  for (const pin of map.pins) {
    const p = map.project(pin.lat, pin.lon, width, height);
    ctx.fillStyle = pin.role === "suggested" ? "#c98a00" : "#222";
    ctx.beginPath();
    ctx.arc(p.x, p.y, 7, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = "#222";
    ctx.font = "12px sans-serif";
    const label = pin.role === "source" ? `${pin.name} (from)` : pin.role === "dest" ? `${pin.name} (to)` : `${pin.name} (alt)`;
    ctx.fillText(label, p.x + 10, p.y - 8);
  }

  for (const marker of map.markers) {
    const p = map.project(marker.lat, marker.lon, width, height);
    ctx.fillStyle = marker.available > 0 ? "#2e7d32" : "#b23b3b";
    ctx.fillRect(p.x - 9, p.y - 6, 18, 12);
    ctx.fillStyle = "#fff";
    ctx.font = "10px sans-serif";
    ctx.fillText("BUS", p.x - 8, p.y + 3);
    ctx.fillStyle = "#222";
    ctx.font = "12px sans-serif";
    ctx.fillText(
      `${marker.busId}: ${marker.available} seats, ${Math.round(marker.etaSeconds)}s`,
      p.x + 12,
      p.y + 4,
    );
  }
}

/** Wire mouse dragging on the canvas to the model's pan offset. */
export function enablePanning(
  canvas: HTMLCanvasElement,
  map: () => MapViewModel | null,
  redraw: () => void,
): void {
  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener("mousedown", (e) => {
    dragging = true;
    lastX = e.offsetX;
    lastY = e.offsetY;
  });
  canvas.addEventListener("mousemove", (e) => {
    const m = map();
    if (!dragging || !m) {
      return;
    }
    m.pan(e.offsetX - lastX, e.offsetY - lastY);
    lastX = e.offsetX;
    lastY = e.offsetY;
    redraw();
  });
  for (const ev of ["mouseup", "mouseleave"] as const) {
    canvas.addEventListener(ev, () => {
      dragging = false;
    });
  }
}
