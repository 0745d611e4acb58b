/**
 * Top-down map of the virtual world: activities as circles, the avatar as
 * a marker.  Clicking empty ground walks there; clicking an activity
 * engages it.  Novel activities get a highlight class fed from the last
 * novelty report.
 */

import { NoveltyDoc, PositionDoc, StateDoc, WorldDoc } from "./api.js";

export interface ViewBox {
  width: number;
  height: number;
}

/** World x/y to pixel coordinates, y flipped so north is up. */
export function toPixel(
  world: WorldDoc,
  box: ViewBox,
  pos: { x: number; y: number },
): { left: number; top: number } {
  const { min, max } = world.bounds;
  const sx = box.width / (max.x - min.x);
  const sy = box.height / (max.y - min.y);
  return {
    left: (pos.x - min.x) * sx,
    top: box.height - (pos.y - min.y) * sy,
  };
}

/** Pixel coordinates back to world x/y (inverse of toPixel). */
export function toWorld(
  world: WorldDoc,
  box: ViewBox,
  pixel: { left: number; top: number },
): { x: number; y: number } {
  const { min, max } = world.bounds;
  const sx = (max.x - min.x) / box.width;
  const sy = (max.y - min.y) / box.height;
  return {
    x: min.x + pixel.left * sx,
    y: min.y + (box.height - pixel.top) * sy,
  };
}

export interface WorldViewCallbacks {
  onMove: (x: number, y: number) => void;
  onEngage: (activityId: string) => void;
}

export class WorldView {
  private readonly markers = new Map<string, HTMLElement>();
  private readonly avatar: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly world: WorldDoc,
    private readonly box: ViewBox,
    private readonly callbacks: WorldViewCallbacks,
  ) {
    root.classList.add("world-view");
    root.style.position = "relative";
    root.style.width = `${box.width}px`;
    root.style.height = `${box.height}px`;

    for (const activity of world.activities) {
      const marker = root.ownerDocument.createElement("button");
      marker.className = "activity";
      marker.dataset.activityId = activity.id;
      marker.title = activity.name;
      marker.textContent = activity.id;
      this.place(marker, activity.position);
      marker.addEventListener("click", (event) => {
        event.stopPropagation();
        this.callbacks.onEngage(activity.id);
      });
      root.appendChild(marker);
      this.markers.set(activity.id, marker);
    }

    this.avatar = root.ownerDocument.createElement("div");
    this.avatar.className = "avatar";
    this.place(this.avatar, world.spawn);
    root.appendChild(this.avatar);

    root.addEventListener("click", (event) => {
      const rect = root.getBoundingClientRect();
      const here = toWorld(this.world, this.box, {
        left: event.clientX - rect.left,
        top: event.clientY - rect.top,
      });
      this.callbacks.onMove(here.x, here.y);
    });
  }

  private place(el: HTMLElement, pos: PositionDoc | { x: number; y: number }): void {
    const pixel = toPixel(this.world, this.box, pos);
    el.style.left = `${pixel.left}px`;
    el.style.top = `${pixel.top}px`;
  }

  /** Reflect avatar position, engagement, and novelty highlights. */
  update(state: StateDoc): void {
    this.place(this.avatar, state.avatar);
    this.applyNovelty(state.novelty, state.engaged);
  }

  applyNovelty(novelty: NoveltyDoc, engaged: string | null): void {
    for (const [aid, marker] of this.markers) {
      marker.classList.toggle("novel", novelty.activities[aid]?.novel === true);
      marker.classList.toggle("engaged", aid === engaged);
    }
  }
}
