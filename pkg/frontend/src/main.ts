/** Application bootstrap: wires the session, canvas and DOM controls. */

import { AnnotationApi } from "./api.js";
import { AnnotatorCanvas } from "./canvas.js";
import { AnnotationSession } from "./session.js";

const api = new AnnotationApi();
const session = new AnnotationSession(api);

const el = {
  imageList: document.getElementById("image-list") as HTMLUListElement,
  canvas: document.getElementById("editor") as HTMLCanvasElement,
  label: document.getElementById("label-input") as HTMLInputElement,
  save: document.getElementById("save-button") as HTMLButtonElement,
  remove: document.getElementById("delete-button") as HTMLButtonElement,
  overlay: document.getElementById("overlay-button") as HTMLButtonElement,
  zoomIn: document.getElementById("zoom-in") as HTMLButtonElement,
  zoomOut: document.getElementById("zoom-out") as HTMLButtonElement,
  zoomFit: document.getElementById("zoom-fit") as HTMLButtonElement,
  status: document.getElementById("status") as HTMLSpanElement,
  title: document.getElementById("current-image") as HTMLSpanElement,
};

const editor = new AnnotatorCanvas(el.canvas, session);

function setStatus(text: string, isError = false): void {
  el.status.textContent = text;
  el.status.classList.toggle("error", isError);
}

function refreshChrome(): void {
  const entry = session.current;
  el.title.textContent = entry
    ? `${entry.id} (${session.currentIndex + 1}/${session.imageList.length})` +
      (session.dirty ? " — unsaved" : "")
    : "no image";
  el.save.disabled = !session.dirty;
  const selected = session.selectedBox;
  el.label.disabled = selected === null;
  el.remove.disabled = selected === null;
  el.label.value = selected !== null ? session.boxes()[selected].transcription : "";
  for (const item of el.imageList.querySelectorAll("li")) {
    item.classList.toggle("active", item.dataset.index === String(session.currentIndex));
  }
}

function renderImageList(): void {
  el.imageList.replaceChildren(
    ...session.imageList.map((entry, index) => {
      const item = document.createElement("li");
      item.dataset.index = String(index);
      item.textContent = `${entry.hasAnnotation ? "● " : "○ "}${entry.id}`;
      item.addEventListener("click", () => void openImage(index));
      return item;
    }),
  );
}

async function openImage(index: number): Promise<void> {
  if (session.hasUnsavedEdits() && !confirm("Discard unsaved edits?")) {
    return;
  }
  await session.open(index);
  const image = new Image();
  image.src = api.imageUrl(session.imageList[index].id);
  await image.decode();
  editor.setImage(image);
  setStatus("");
  renderImageList();
  refreshChrome();
}

async function saveCurrent(): Promise<void> {
  const result = await session.save();
  if (result.kind === "saved") {
    setStatus(`saved (version ${result.version})`);
    renderImageList();
  } else if (result.kind === "invalid") {
    setStatus(result.detail, true);
  }
  refreshChrome();
}

editor.onBoxDrawn = (rect) => {
  if (session.addBox(rect) !== null) {
    refreshChrome();
    el.label.focus();
  }
  editor.render();
};

editor.onBoxSelected = (index) => {
  session.selectedBox = index;
  refreshChrome();
  editor.render();
};

editor.onOverlayAccepted = (index) => {
  if (session.acceptOverlayBox(index) !== null) {
    setStatus("detector box accepted; add a label");
    refreshChrome();
    editor.render();
    el.label.focus();
  }
};

el.label.addEventListener("input", () => {
  if (session.selectedBox !== null) {
    session.setLabel(session.selectedBox, el.label.value);
    refreshChrome();
    editor.render();
  }
});

el.save.addEventListener("click", () => void saveCurrent());
el.remove.addEventListener("click", () => {
  if (session.selectedBox !== null) {
    session.removeBox(session.selectedBox);
    refreshChrome();
    editor.render();
  }
});
el.overlay.addEventListener("click", () => {
  void session.loadOverlay().then(() => {
    setStatus(
      session.overlay.length
        ? `${session.overlay.length} detector suggestion(s); double-click one to accept`
        : "detector found nothing",
    );
    editor.render();
  });
});
el.zoomIn.addEventListener("click", () => editor.zoomBy(1.25));
el.zoomOut.addEventListener("click", () => editor.zoomBy(1 / 1.25));
el.zoomFit.addEventListener("click", () => editor.fit());

document.addEventListener("keydown", (e) => {
  if (e.target === el.label) {
    if (e.key === "Enter") {
      el.label.blur();
    }
    return;
  }
  if (e.key === "ArrowRight" && session.currentIndex < session.imageList.length - 1) {
    void openImage(session.currentIndex + 1);
  } else if (e.key === "ArrowLeft" && session.currentIndex > 0) {
    void openImage(session.currentIndex - 1);
  } else if ((e.key === "Delete" || e.key === "Backspace") && session.selectedBox !== null) {
    session.removeBox(session.selectedBox);
    refreshChrome();
    editor.render();
  } else if (e.key === "s" && (e.ctrlKey || e.metaKey)) {
    e.preventDefault();
    void saveCurrent();
  }
});

window.addEventListener("beforeunload", (e) => {
  if (session.hasUnsavedEdits()) {
    e.preventDefault();
  }
});

function sizeCanvas(): void {
  const parent = el.canvas.parentElement!;
  el.canvas.width = parent.clientWidth;
  el.canvas.height = parent.clientHeight;
  editor.fit();
}

window.addEventListener("resize", sizeCanvas);

async function start(): Promise<void> {
  await session.refreshImageList();
  renderImageList();
  sizeCanvas();
  if (session.imageList.length > 0) {
    await openImage(0);
  } else {
    setStatus("dataset directory contains no images", true);
  }
}

void start();
