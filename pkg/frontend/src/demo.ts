/**
 * Synthetic landmark producer: a deterministic talking face for demo mode
 * (no camera needed) and for tests. Geometry mirrors the engine's canonical
 * head frame so every record passes engine-side validation and scores as a
 * calm, steadily talking speaker.
 */

import { FACE_POINT_COUNT, HAND_POINT_COUNT, Point3 } from "./protocol.js";
import { LandmarkFrameData } from "./capture.js";

const UNITS_PER_METER = 2.2;

// Pose anchors in meters, canonical head frame (+x subject's left, +y up,
// +z toward camera, anchor centroid at origin) - matches the engine's
// face_template_v1.csv.
const ANCHORS: Array<[number, Point3]> = [
  [1, [0.0, 0.009333333333333334, 0.018783333333333332]],
  [199, [0.0, -0.05426666666666667, 0.006283333333333332]],
  [33, [-0.0433, 0.04203333333333333, -0.007216666666666666]],
  [263, [0.0433, 0.04203333333333333, -0.007216666666666666]],
  [61, [-0.0289, -0.019566666666666663, -0.0053166666666666675]],
  [291, [0.0289, -0.019566666666666663, -0.0053166666666666675]],
];

const EYE_LINE_Y = 0.04203333333333333;
const EYE_Z = -0.007216666666666666;
const EYE_OUTER_X = 0.0433;
const EYE_INNER_X = 0.0197;
const EYE_CENTER_X = (EYE_OUTER_X + EYE_INNER_X) / 2;
const EYE_HALF_GAP = 0.15 * (EYE_OUTER_X - EYE_INNER_X);
const MOUTH_Y = -0.019566666666666663;
const MOUTH_Z = -0.0053166666666666675;
const MOUTH_WIDTH = 0.0578;

const LEFT_EYE = [33, 160, 158, 133, 153, 144];
const RIGHT_EYE = [362, 385, 387, 263, 373, 380];
const LEFT_IRIS = [468, 469, 470, 471, 472];
const RIGHT_IRIS = [473, 474, 475, 476, 477];

function project([x, y, z]: Point3): Point3 {
  return [0.5 + x * UNITS_PER_METER, 0.5 - y * UNITS_PER_METER, -z * UNITS_PER_METER];
}

function eyePoints(sign: 1 | -1, contour: number[], iris: number[], halfGap: number) {
  const entries: Array<[number, Point3]> = [];
  // contour order is (corner, upper, upper, corner, lower, lower); the first
  // listed corner is the image-left one for both eyes
  const xs = [sign * EYE_OUTER_X, sign * EYE_INNER_X].sort((a, b) => a - b);
  const [p1, p2, p3, p4, p5, p6] = contour;
  entries.push([p1, [xs[0], EYE_LINE_Y, EYE_Z]]);
  entries.push([p4, [xs[1], EYE_LINE_Y, EYE_Z]]);
  const third = (EYE_OUTER_X - EYE_INNER_X) / 3;
  const columnA = sign * (EYE_OUTER_X - third);
  const columnB = sign * (EYE_INNER_X + third);
  entries.push([p2, [columnA, EYE_LINE_Y + halfGap, EYE_Z]]);
  entries.push([p6, [columnA, EYE_LINE_Y - halfGap, EYE_Z]]);
  entries.push([p3, [columnB, EYE_LINE_Y + halfGap, EYE_Z]]);
  entries.push([p5, [columnB, EYE_LINE_Y - halfGap, EYE_Z]]);
  const center = sign * EYE_CENTER_X;
  const offsets: Array<[number, number]> = [
    [0, 0],
    [0.002, 0],
    [-0.002, 0],
    [0, 0.002],
    [0, -0.002],
  ];
  iris.forEach((index, i) => {
    entries.push([index, [center + offsets[i][0], EYE_LINE_Y + offsets[i][1], EYE_Z]]);
  });
  return entries;
}

/** Deterministic talking face; returns a full 478-point frame every call. */
export function demoProducer(t_ms: number): LandmarkFrameData {
  const face: Point3[] = new Array(FACE_POINT_COUNT);
  for (let i = 0; i < FACE_POINT_COUNT; i++) {
    const theta = (2 * Math.PI * i) / FACE_POINT_COUNT;
    face[i] = project([
      0.065 * Math.cos(theta),
      0.085 * Math.sin(theta),
      -0.01 + 0.00005 * (i % 11),
    ]);
  }
  for (const [index, coords] of ANCHORS) {
    face[index] = project(coords);
  }

  // occasional blink: ~12 per minute, three closed frames each
  const blinkPhase = (t_ms / 1000) % 5;
  const openness = blinkPhase < 0.1 ? 0.3 : 1.0;
  for (const [index, coords] of eyePoints(-1, LEFT_EYE, LEFT_IRIS, EYE_HALF_GAP * openness)) {
    face[index] = project(coords);
  }
  for (const [index, coords] of eyePoints(1, RIGHT_EYE, RIGHT_IRIS, EYE_HALF_GAP * openness)) {
    face[index] = project(coords);
  }

  // gentle smile cycle and triangle-wave talking lips
  const smiling = (t_ms / 1000) % 20 < 12;
  const lar = smiling ? 1.8 : 1.2;
  const outerHalf = MOUTH_WIDTH / lar / 2;
  face[0] = project([0, MOUTH_Y + outerHalf, MOUTH_Z]);
  face[17] = project([0, MOUTH_Y - outerHalf, MOUTH_Z]);
  const frame16 = Math.floor(t_ms / 33) % 16;
  const tri = frame16 <= 8 ? frame16 : 16 - frame16;
  const gapUnits = 0.005 + 0.0025 * tri;
  const innerHalf = gapUnits / UNITS_PER_METER / 2;
  face[13] = project([0, MOUTH_Y + innerHalf, MOUTH_Z]);
  face[14] = project([0, MOUTH_Y - innerHalf, MOUTH_Z]);

  // hands sway at a moderate pace below the face
  const sway = 0.08 * Math.sin((2 * Math.PI * t_ms) / 2400);
  const leftHand = handAt(0.25 + sway, 0.92);
  const rightHand = handAt(0.75 - sway, 0.92);
  return { face, leftHand, rightHand };
}

function handAt(x: number, y: number): Point3[] {
  const pts: Point3[] = [];
  for (let j = 0; j < HAND_POINT_COUNT; j++) {
    pts.push([x + 0.003 * (j % 5), y + 0.003 * Math.floor(j / 5), 0]);
  }
  return pts;
}
