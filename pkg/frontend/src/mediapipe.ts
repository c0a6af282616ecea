/**
 * Webcam landmark source backed by MediaPipe Tasks Vision, loaded from CDN
 * at runtime (the models only run in a browser). Produces the 478-point
 * face (iris refinement on) plus 21-point hands keyed by handedness.
 */

import { FACE_POINT_COUNT, HAND_POINT_COUNT, Point3 } from "./protocol.js";
import { LandmarkFrameData } from "./capture.js";

const TASKS_VISION_URL =
  "https://cdn.jsdelivr.net/npm/@mediapipe/tasks-vision@0.10.14";
const WASM_URL = `${TASKS_VISION_URL}/wasm`;
const FACE_MODEL_URL =
  "https://storage.googleapis.com/mediapipe-models/face_landmarker/face_landmarker/float16/1/face_landmarker.task";
const HAND_MODEL_URL =
  "https://storage.googleapis.com/mediapipe-models/hand_landmarker/hand_landmarker/float16/1/hand_landmarker.task";

interface NormalizedLandmark {
  x: number;
  y: number;
  z: number;
}

function toPoints(landmarks: NormalizedLandmark[]): Point3[] {
  return landmarks.map((p) => [p.x, p.y, p.z]);
}

export class WebcamSource {
  private constructor(
    private readonly faceLandmarker: any,
    private readonly handLandmarker: any,
    private readonly video: HTMLVideoElement,
  ) {}

  /** Load WASM + models and bind the camera; throws on denial or failure. */
  static async open(video: HTMLVideoElement): Promise<WebcamSource> {
    const stream = await navigator.mediaDevices.getUserMedia({
      video: { width: 640, height: 480 },
      audio: false,
    });
    video.srcObject = stream;
    await video.play();

    const vision = await import(/* @vite-ignore */ TASKS_VISION_URL);
    const fileset = await vision.FilesetResolver.forVisionTasks(WASM_URL);
    const faceLandmarker = await vision.FaceLandmarker.createFromOptions(fileset, {
      baseOptions: { modelAssetPath: FACE_MODEL_URL, delegate: "GPU" },
      runningMode: "VIDEO",
      numFaces: 1,
    });
    const handLandmarker = await vision.HandLandmarker.createFromOptions(fileset, {
      baseOptions: { modelAssetPath: HAND_MODEL_URL, delegate: "GPU" },
      runningMode: "VIDEO",
      numHands: 2,
    });
    return new WebcamSource(faceLandmarker, handLandmarker, video);
  }

  /** One detection pass; face is null whenever the model loses the subject. */
  produce(t_ms: number): LandmarkFrameData {
    const faceResult = this.faceLandmarker.detectForVideo(this.video, t_ms);
    const landmarks: NormalizedLandmark[] | undefined = faceResult.faceLandmarks?.[0];
    if (!landmarks || landmarks.length !== FACE_POINT_COUNT) {
      return { face: null, leftHand: null, rightHand: null };
    }
    let leftHand: Point3[] | null = null;
    let rightHand: Point3[] | null = null;
    const handResult = this.handLandmarker.detectForVideo(this.video, t_ms);
    const hands: NormalizedLandmark[][] = handResult.landmarks ?? [];
    const labels: Array<Array<{ categoryName: string }>> = handResult.handednesses ?? [];
    hands.forEach((points, i) => {
      if (points.length !== HAND_POINT_COUNT) return;
      const label = labels[i]?.[0]?.categoryName ?? "";
      if (label === "Left") leftHand = toPoints(points);
      else if (label === "Right") rightHand = toPoints(points);
    });
    return { face: toPoints(landmarks), leftHand, rightHand };
  }

  close(): void {
    const stream = this.video.srcObject as MediaStream | null;
    stream?.getTracks().forEach((track) => track.stop());
    this.video.srcObject = null;
    this.faceLandmarker?.close();
    this.handLandmarker?.close();
  }
}
