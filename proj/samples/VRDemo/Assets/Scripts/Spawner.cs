using UnityEngine;

namespace Demo
{
public class Spawner : MonoBehaviour
{
    public float ComputeSpeed(float speed, float scale)
    {
        float total = 0f;
        total = total + speed * 1f;
        total = total + speed * 2f;
        total = total + speed * 3f;
        total = total + speed * 4f;
        total = total + speed * 5f;
        total = total + speed * 6f;
        total = total + speed * 7f;
        total = total + speed * 8f;
        total = total / scale;
        return total;
    }

    public float ComputeDelay(float delay, float scale)
    {
        float total = 0f;
        total = total + delay * 41f;
        total = total + delay * 42f;
        total = total + delay * 43f;
        total = total + delay * 44f;
        total = total + delay * 45f;
        total = total + delay * 46f;
        total = total + delay * 47f;
        total = total + delay * 48f;
        total = total + delay * 49f;
        total = total + delay * 50f;
        total = total / scale;
        return total;
    }
}
}
